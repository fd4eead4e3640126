#pragma once

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "iacopt/catalogue.hpp"
#include "iacopt/doml/ast.hpp"

namespace iacopt::doml {

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Fixed-point rendering with exactly `digits` fraction digits.
inline std::string format_fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

namespace detail {

inline std::string trim_fraction_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    std::size_t last = s.find_last_not_of('0');
    if (s[last] == '.') --last;
    s.erase(last + 1);
    return s;
}

}  // namespace detail

/// Minimal decimal rendering (up to six fraction digits, trailing zeros
/// dropped): 1024 -> "1024", 97.5 -> "97.5".
inline std::string format_number(double value) {
    return detail::trim_fraction_zeros(format_fixed(value, 6));
}

/// Minimal rendering capped at `digits` fraction digits: 230.53 -> "230.53",
/// 97.50 -> "97.5", 230.00 -> "230".
inline std::string format_trimmed(double value, int digits) {
    return detail::trim_fraction_zeros(format_fixed(value, digits));
}

/// Requirement thresholds always carry a decimal point: 300 -> "300.0".
inline std::string format_threshold(double value) {
    std::string s = format_number(value);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

/// Renders a solution objective value: cost and availability use a minimal
/// representation with at most two fraction digits; performance always shows
/// one fraction digit.
inline std::string format_objective_value(const std::string& objective, double value) {
    if (objective == "performance") return format_fixed(value, 1);
    return format_trimmed(value, 2);
}

/// Replaces every character outside [A-Za-z0-9_] with '_' and prefixes '_'
/// when the result would not start with a letter or underscore. Idempotent.
inline std::string sanitize_identifier(std::string_view id) {
    std::string out;
    out.reserve(id.size() + 1);
    for (char c : id) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())))
        out.insert(out.begin(), '_');
    return out;
}

// ---------------------------------------------------------------------------
// Rendering (AST -> text)
// ---------------------------------------------------------------------------

namespace detail {

inline std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

inline void render_property(std::string& out, const Property& p, int level) {
    out += indent(level) + p.key + " = ";
    if (const auto* s = std::get_if<std::string>(&p.value)) {
        out += '"' + *s + '"';
    } else {
        double v = std::get<double>(p.value);
        // Cost properties keep two fraction digits (e.g. 130.00).
        bool is_cost = p.key.size() >= 13 &&
                       p.key.compare(p.key.size() - 13, 13, "Cost_Currency") == 0;
        out += is_cost ? format_fixed(v, 2) : format_number(v);
    }
    out += '\n';
}

}  // namespace detail

inline std::string render_solution(const SolutionRecord& sol, int level = 0) {
    using detail::indent;
    std::string out;
    out += indent(level) + "solution " + sol.name + " {\n";
    out += indent(level + 1) + "objectives {\n";
    for (const auto& ov : sol.objective_values) {
        out += indent(level + 2) + ov.name + ' ' + format_objective_value(ov.name, ov.value) +
               ' ' + ov.unit + '\n';
    }
    out += indent(level + 1) + "}\n";
    out += indent(level + 1) + "decisions [";
    for (std::size_t i = 0; i < sol.decisions.size(); ++i) {
        if (i) out += ", ";
        out += '"' + sol.decisions[i] + '"';
    }
    out += "]\n";
    out += indent(level) + "}\n";
    return out;
}

inline std::string render_requirement(const Requirement& req, int level) {
    using detail::indent;
    std::string out = indent(level);
    if (const auto* bound = std::get_if<AggregateBound>(&req)) {
        out += bound->id + " \"" + bound->description + "\" " +
               (bound->kind == BoundKind::max ? "max " : "min ") +
               format_threshold(bound->threshold) + " => \"" + to_string(bound->target) + "\"";
    } else if (const auto* match = std::get_if<CategoricalMatch>(&req)) {
        std::string values;
        for (std::size_t i = 0; i < match->allowed.size(); ++i) {
            if (i) values += ", ";
            values += match->allowed[i];
        }
        out += match->id + " \"" + match->description + "\" values \"" + values + "\" => \"" +
               to_string(match->target) + "\"";
    } else {
        const auto& kv = std::get<KeyValue>(req);
        out += kv.id + " \"" + kv.key + "\" => \"" + kv.value + "\"";
    }
    return out + "\n";
}

inline std::string render_optimization(const OptimizationSpec& spec) {
    using detail::indent;
    std::string out = "optimization " + spec.name + " {\n";
    out += indent(1) + "objectives {\n";
    for (const auto& obj : spec.objectives) {
        out += indent(2) + '"' + to_string(obj.name) + "\" => " +
               (obj.direction == Direction::minimize ? "min" : "max") + '\n';
    }
    out += indent(1) + "}\n";
    out += indent(1) + "nonfunctional_requirements {\n";
    for (const auto& req : spec.requirements) out += render_requirement(req, 2);
    out += indent(1) + "}\n";
    for (const auto& sol : spec.solutions) out += render_solution(sol, 1);
    out += "}";
    return out;
}

inline std::string render_infrastructure(const InfrastructureModel& model) {
    using detail::indent;
    std::string out = "infrastructure " + model.name + " {\n";
    for (const auto& net : model.networks) {
        out += indent(1) + "net " + net.name + " {\n";
        out += indent(2) + "cidr \"" + net.cidr + "\"\n";
        out += indent(2) + "protocol \"" + net.protocol + "\"\n";
        for (const auto& sn : net.subnets) {
            out += indent(2) + "subnet " + sn.name + " {\n";
            out += indent(3) + "cidr \"" + sn.cidr + "\"\n";
            if (!sn.connections.empty()) {
                out += indent(3) + "connections { ";
                for (std::size_t i = 0; i < sn.connections.size(); ++i) {
                    if (i) out += ", ";
                    out += sn.connections[i];
                }
                out += " }\n";
            }
            out += indent(2) + "}\n";
        }
        out += indent(1) + "}\n";
    }
    auto render_vm = [](std::string& dst, const VirtualMachine& vm, int level) {
        dst += detail::indent(level) + "vm " + vm.name + " {\n";
        dst += detail::indent(level + 1) + "os \"" + vm.os + "\"\n";
        for (const auto& iface : vm.ifaces) {
            dst += detail::indent(level + 1) + "iface " + iface.name + " {\n";
            dst += detail::indent(level + 2) + "belongs_to " + iface.subnet + '\n';
            dst += detail::indent(level + 1) + "}\n";
        }
        if (vm.storage_gb)
            dst += detail::indent(level + 1) + "sto \"" + format_number(*vm.storage_gb) + "\"\n";
        dst += detail::indent(level) + "}\n";
    };
    for (const auto& vm : model.vms) render_vm(out, vm, 1);
    for (const auto& img : model.vm_images) {
        out += indent(1) + "vm_image " + img.name + " {\n";
        out += indent(2) + "generates " + img.generates + '\n';
        out += indent(1) + "}\n";
    }
    for (const auto& asg : model.autoscale_groups) {
        out += indent(1) + "autoscale_group " + asg.name + " {\n";
        render_vm(out, asg.vm, 2);
        out += indent(2) + "min " + std::to_string(asg.min_instances) + '\n';
        out += indent(2) + "max " + std::to_string(asg.max_instances) + '\n';
        out += indent(1) + "}\n";
    }
    out += "}";
    return out;
}

inline std::string render_concrete(const ConcreteInfrastructure& ci) {
    using detail::indent;
    std::string out = "concrete_infrastructure " + ci.name + " {\n";
    for (const auto& pb : ci.providers) {
        out += indent(1) + "provider " + pb.provider + " {\n";
        for (const auto& st : pb.storages) {
            out += indent(2) + "storage " + st.name + " {\n";
            out += indent(3) + "properties {\n";
            for (const auto& p : st.properties) detail::render_property(out, p, 4);
            out += indent(3) + "}\n";
            out += indent(2) + "}\n";
        }
        out += indent(1) + "}\n";
    }
    for (const auto& vm : ci.vms) {
        out += indent(1) + "vm " + vm.name + " {\n";
        out += indent(2) + "properties {\n";
        for (const auto& p : vm.properties) detail::render_property(out, p, 3);
        out += indent(2) + "}\n";
        if (vm.maps) out += indent(2) + "maps " + *vm.maps + '\n';
        out += indent(1) + "}\n";
    }
    for (const auto& net : ci.nets) {
        out += indent(1) + "net " + net.name + " {\n";
        out += indent(2) + "maps " + net.maps + '\n';
        out += indent(1) + "}\n";
    }
    for (const auto& img : ci.images) {
        out += indent(1) + "vm_image " + img.name + " {\n";
        out += indent(2) + "image_name \"" + img.image_name + "\"\n";
        out += indent(2) + "maps " + img.maps + '\n';
        out += indent(1) + "}\n";
    }
    for (const auto& asg : ci.asgs) {
        out += indent(1) + "autoscale_group " + asg.name + " {\n";
        out += indent(2) + "properties {\n";
        for (const auto& p : asg.properties) detail::render_property(out, p, 3);
        out += indent(2) + "}\n";
        out += indent(2) + "maps " + asg.maps + '\n';
        out += indent(1) + "}\n";
    }
    out += "}";
    return out;
}

/// Re-emits a parsed document: known layers from their ASTs, unknown blocks
/// verbatim, in the original block order.
inline std::string render_document(const Document& doc) {
    std::string out;
    bool first = true;
    for (const auto& [kind, index] : doc.order) {
        if (!first) out += "\n\n";
        first = false;
        switch (kind) {
        case BlockKind::optimization: out += render_optimization(*doc.optimization); break;
        case BlockKind::infrastructure: out += render_infrastructure(*doc.infrastructure); break;
        case BlockKind::concrete: out += render_concrete(doc.concrete[index]); break;
        case BlockKind::raw: out += doc.raw_blocks[index].text; break;
        }
    }
    out += '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Pipeline emission (splice into the original text)
// ---------------------------------------------------------------------------

/// Inserts rendered solution blocks just before the optimization layer's
/// closing brace, leaving the rest of the document byte-identical. An empty
/// solution list returns the input unchanged.
inline std::string emit_solutions(std::string_view document_text, const Document& doc,
                                  const std::vector<SolutionRecord>& solutions) {
    if (solutions.empty()) return std::string(document_text);
    if (!doc.optimization || doc.optimization_close_brace == std::string::npos)
        throw std::invalid_argument("document has no optimization layer to extend");
    for (const auto& sol : solutions)
        if (sol.objective_values.size() != doc.optimization->objectives.size())
            throw std::invalid_argument("solution '" + sol.name +
                                        "' has a mismatched objective count");

    std::string inserted;
    std::size_t brace = doc.optimization_close_brace;
    if (brace > document_text.size())
        throw std::invalid_argument("optimization block position out of range");
    if (brace == 0 || document_text[brace - 1] != '\n') inserted += '\n';
    for (const auto& sol : solutions) inserted += render_solution(sol, 1);
    std::string out(document_text.substr(0, brace));
    out += inserted;
    out += document_text.substr(brace);
    return out;
}

// ---------------------------------------------------------------------------
// Concretization
// ---------------------------------------------------------------------------

struct ConcretizationOptions {
    std::string default_image_name = "unknown-image";
};

struct ConcretizationResult {
    std::vector<ConcreteInfrastructure> blocks;
    std::string text;  // rendered blocks separated by blank lines
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<Property> element_properties(const catalogue::CatalogueElement& e,
                                                const char* prefix) {
    std::string sanitized = sanitize_identifier(e.id);
    std::vector<Property> props;
    props.push_back({std::string(prefix) + "flavor", sanitized});
    props.push_back({std::string(prefix) + "name", sanitized});
    props.push_back({std::string(prefix) + "Availability", e.availability});
    if (e.element_type == catalogue::ElementType::storage) {
        props.push_back({"st_Cost_Currency", e.cost});
        props.push_back({"st_Request_Response_time_Storage_Performance", e.performance});
        props.push_back({"st_provider_OU", e.provider});
    } else {
        props.push_back({"vm_Response_time_Virtual_Machine_Performance", e.performance});
        props.push_back({"vm_Memory", e.memory_gb.value_or(0.0)});
        props.push_back({"vm_provider_OU", e.provider});
        props.push_back({"vm_Cost_Currency", e.cost});
    }
    return props;
}

}  // namespace detail

/// Builds the concrete infrastructure block for one ranked solution
/// (1-based rank becomes the opt_infra<k> suffix).
inline ConcreteInfrastructure build_concrete_infrastructure(
    std::size_t rank, const SolutionRecord& sol, const InfrastructureModel& model,
    const catalogue::Catalogue& cat, const ConcretizationOptions& opts,
    std::vector<std::string>& warnings) {
    ConcreteInfrastructure ci;
    ci.name = "opt_infra" + std::to_string(rank);

    std::vector<const catalogue::CatalogueElement*> chosen;
    for (const auto& id : sol.decisions) {
        const auto* e = cat.find(id);
        if (!e)
            throw std::invalid_argument("decision '" + id + "' does not resolve in the catalogue");
        chosen.push_back(e);
    }

    std::vector<const catalogue::CatalogueElement*> vms, storages;
    for (const auto* e : chosen)
        (e->element_type == catalogue::ElementType::vm ? vms : storages).push_back(e);

    // Storage elements grouped by provider, first-occurrence order.
    for (const auto* st : storages) {
        ProviderBlock* block = nullptr;
        for (auto& pb : ci.providers)
            if (pb.provider == st->provider) block = &pb;
        if (!block) {
            ci.providers.push_back(ProviderBlock{st->provider, {}});
            block = &ci.providers.back();
        }
        block->storages.push_back(
            ConcreteStorage{sanitize_identifier(st->id), detail::element_properties(*st, "st_")});
    }

    // The i-th chosen VM maps onto the i-th declared abstract VM.
    for (std::size_t i = 0; i < vms.size(); ++i) {
        ConcreteVm cvm;
        cvm.name = sanitize_identifier(vms[i]->id);
        cvm.properties = detail::element_properties(*vms[i], "vm_");
        if (i < model.vms.size()) {
            cvm.maps = model.vms[i].name;
        } else {
            warnings.push_back(ci.name + ": chosen VM '" + vms[i]->id +
                               "' has no abstract VM left to map onto");
        }
        ci.vms.push_back(std::move(cvm));
    }

    for (const auto& net : model.networks)
        ci.nets.push_back(ConcreteNet{"opt_network_" + sanitize_identifier(net.name), net.name});

    if (!model.vm_images.empty()) {
        const catalogue::CatalogueElement* provider_source =
            !vms.empty() ? vms.front() : (!chosen.empty() ? chosen.front() : nullptr);
        std::string image_name = opts.default_image_name;
        if (provider_source) {
            if (auto found = catalogue::lookup_image(cat, provider_source->provider)) {
                image_name = *found;
            } else {
                warnings.push_back(ci.name + ": no image registered for provider '" +
                                   provider_source->provider + "'; using default");
            }
        } else {
            warnings.push_back(ci.name + ": no chosen element determines an image provider");
        }
        for (const auto& img : model.vm_images)
            ci.images.push_back(
                ConcreteImage{"concrete_" + sanitize_identifier(img.name), image_name, img.name});
    }

    // Autoscale groups carry the chosen VM's flavor; without a chosen VM there
    // is nothing to scale, so the groups are omitted.
    if (!vms.empty()) {
        std::string flavor = sanitize_identifier(vms.front()->id);
        for (const auto& asg : model.autoscale_groups) {
            ConcreteAsg casg;
            casg.name = "concrete_" + sanitize_identifier(asg.name);
            casg.properties.push_back({"vm_flavor", flavor});
            casg.properties.push_back({"vm_name", flavor});
            casg.maps = asg.name;
            ci.asgs.push_back(std::move(casg));
        }
    }
    return ci;
}

/// Emits one concrete_infrastructure block per solution, in rank order.
inline ConcretizationResult emit_concretization(const std::vector<SolutionRecord>& solutions,
                                                const InfrastructureModel& model,
                                                const catalogue::Catalogue& cat,
                                                const ConcretizationOptions& opts = {}) {
    ConcretizationResult result;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        result.blocks.push_back(build_concrete_infrastructure(i + 1, solutions[i], model, cat,
                                                              opts, result.warnings));
        if (i) result.text += "\n\n";
        result.text += render_concrete(result.blocks.back());
    }
    return result;
}

}  // namespace iacopt::doml
