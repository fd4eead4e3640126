#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "iacopt/doml/ast.hpp"
#include "iacopt/doml/lexer.hpp"
#include "iacopt/doml/text_util.hpp"

namespace iacopt::doml {

namespace detail {

inline std::string describe(const Token& t) {
    switch (t.kind) {
    case TokenKind::identifier: return "identifier '" + t.text + "'";
    case TokenKind::string: return "string \"" + t.text + "\"";
    case TokenKind::number: return "number " + t.text;
    case TokenKind::end_of_input: return "end of input";
    default: return "'" + t.text + "'";
    }
}

}  // namespace detail

/// Recursive-descent parser over the token stream produced by Lexer.
class Parser {
public:
    explicit Parser(std::string_view source)
        : source_(source), tokens_(Lexer(source).tokenize()) {}

    Document parse_document() {
        Document doc;
        while (!at(TokenKind::end_of_input)) {
            const Token& head = peek();
            if (head.kind != TokenKind::identifier)
                fail("expected a top-level block, got " + detail::describe(head), head);

            if (head.text == "optimization") {
                if (doc.optimization)
                    fail("duplicate optimization block", head);
                advance();
                std::size_t close = 0;
                doc.optimization = parse_optimization_block(&close);
                doc.optimization_close_brace = close;
                doc.order.emplace_back(BlockKind::optimization, 0);
            } else if (head.text == "infrastructure") {
                if (doc.infrastructure)
                    fail("duplicate infrastructure block", head);
                advance();
                doc.infrastructure = parse_infrastructure_block();
                doc.order.emplace_back(BlockKind::infrastructure, 0);
            } else if (head.text == "concrete_infrastructure") {
                advance();
                ConcreteInfrastructure ci = parse_concrete_block();
                for (const auto& prev : doc.concrete)
                    if (prev.name == ci.name)
                        fail("duplicate concrete_infrastructure block '" + ci.name + "'", head);
                doc.order.emplace_back(BlockKind::concrete, doc.concrete.size());
                doc.concrete.push_back(std::move(ci));
            } else {
                doc.order.emplace_back(BlockKind::raw, doc.raw_blocks.size());
                doc.raw_blocks.push_back(parse_raw_block());
            }
        }
        doc.warnings = warnings_;
        return doc;
    }

    const std::vector<Diagnostic>& warnings() const { return warnings_; }

    // -- optimization layer -------------------------------------------------

    OptimizationSpec parse_optimization_block(std::size_t* close_brace_offset = nullptr) {
        OptimizationSpec spec;
        spec.name = expect(TokenKind::identifier, "optimization block name").text;
        expect(TokenKind::lbrace, "'{' after optimization name");

        bool seen_objectives = false, seen_requirements = false;
        while (!at(TokenKind::rbrace)) {
            const Token& head = peek();
            if (head.kind != TokenKind::identifier)
                fail("expected 'objectives', 'nonfunctional_requirements' or 'solution', got " +
                         detail::describe(head),
                     head);
            if (head.text == "objectives") {
                if (seen_objectives) fail("duplicate objectives block", head);
                seen_objectives = true;
                advance();
                parse_objectives(spec);
            } else if (head.text == "nonfunctional_requirements") {
                if (seen_requirements) fail("duplicate nonfunctional_requirements block", head);
                seen_requirements = true;
                advance();
                parse_requirements(spec);
            } else if (head.text == "solution") {
                advance();
                spec.solutions.push_back(parse_solution_block());
            } else {
                fail("unknown optimization sub-block '" + head.text + "'", head);
            }
        }
        const Token& close = expect(TokenKind::rbrace, "'}'");
        if (close_brace_offset) *close_brace_offset = close.offset;
        spec.priority = 0;  // the first declared objective is the priority
        return spec;
    }

    // -- infrastructure layer -----------------------------------------------

    InfrastructureModel parse_infrastructure_block() {
        InfrastructureModel model;
        model.name = expect(TokenKind::identifier, "infrastructure block name").text;
        expect(TokenKind::lbrace, "'{' after infrastructure name");

        std::vector<std::pair<std::string, Token>> iface_refs;     // belongs_to
        std::vector<std::pair<std::string, Token>> image_refs;     // generates
        while (!at(TokenKind::rbrace)) {
            const Token& head = peek();
            if (head.kind != TokenKind::identifier)
                fail("expected an infrastructure entity, got " + detail::describe(head), head);
            if (head.text == "net") {
                advance();
                model.networks.push_back(parse_network());
            } else if (head.text == "vm") {
                advance();
                model.vms.push_back(parse_vm(iface_refs));
            } else if (head.text == "vm_image") {
                advance();
                model.vm_images.push_back(parse_vm_image(image_refs));
            } else if (head.text == "autoscale_group") {
                advance();
                model.autoscale_groups.push_back(parse_autoscale_group(iface_refs));
            } else {
                fail("unknown infrastructure entity '" + head.text + "'", head);
            }
        }
        expect(TokenKind::rbrace, "'}'");
        validate_infrastructure(model, iface_refs, image_refs);
        return model;
    }

    // -- concretization layer -----------------------------------------------

    ConcreteInfrastructure parse_concrete_block() {
        ConcreteInfrastructure ci;
        ci.name = expect(TokenKind::identifier, "concrete_infrastructure name").text;
        expect(TokenKind::lbrace, "'{' after concrete_infrastructure name");
        while (!at(TokenKind::rbrace)) {
            const Token& head = peek();
            if (head.kind != TokenKind::identifier)
                fail("expected a concrete entity, got " + detail::describe(head), head);
            if (head.text == "provider") {
                advance();
                ci.providers.push_back(parse_provider_block());
            } else if (head.text == "vm") {
                advance();
                ci.vms.push_back(parse_concrete_vm());
            } else if (head.text == "net") {
                advance();
                ConcreteNet net;
                net.name = expect(TokenKind::identifier, "net name").text;
                expect(TokenKind::lbrace, "'{'");
                expect_keyword("maps");
                net.maps = expect(TokenKind::identifier, "maps target").text;
                expect(TokenKind::rbrace, "'}'");
                ci.nets.push_back(std::move(net));
            } else if (head.text == "vm_image") {
                advance();
                ConcreteImage img;
                img.name = expect(TokenKind::identifier, "vm_image name").text;
                expect(TokenKind::lbrace, "'{'");
                expect_keyword("image_name");
                img.image_name = expect(TokenKind::string, "image name string").text;
                expect_keyword("maps");
                img.maps = expect(TokenKind::identifier, "maps target").text;
                expect(TokenKind::rbrace, "'}'");
                ci.images.push_back(std::move(img));
            } else if (head.text == "autoscale_group") {
                advance();
                ConcreteAsg asg;
                asg.name = expect(TokenKind::identifier, "autoscale_group name").text;
                expect(TokenKind::lbrace, "'{'");
                expect_keyword("properties");
                asg.properties = parse_properties();
                expect_keyword("maps");
                asg.maps = expect(TokenKind::identifier, "maps target").text;
                expect(TokenKind::rbrace, "'}'");
                ci.asgs.push_back(std::move(asg));
            } else {
                fail("unknown concrete entity '" + head.text + "'", head);
            }
        }
        expect(TokenKind::rbrace, "'}'");
        return ci;
    }

private:
    // -- token stream helpers -----------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at(TokenKind kind) const { return peek().kind == kind; }
    bool at_keyword(const std::string& kw) const {
        return at(TokenKind::identifier) && peek().text == kw;
    }
    const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    const Token& expect(TokenKind kind, const std::string& what) {
        if (!at(kind)) fail("expected " + what + ", got " + detail::describe(peek()), peek());
        return advance();
    }
    const Token& expect_keyword(const std::string& kw) {
        if (!at_keyword(kw)) fail("expected '" + kw + "', got " + detail::describe(peek()), peek());
        return advance();
    }

    [[noreturn]] void fail(const std::string& message, const Token& where) const {
        throw ParseError(message, where.line, where.column);
    }

    void warn(const std::string& message, const Token& where) {
        warnings_.push_back(Diagnostic{message, where.line, where.column});
    }

    // -- optimization details -----------------------------------------------

    void parse_objectives(OptimizationSpec& spec) {
        expect(TokenKind::lbrace, "'{' after objectives");
        while (!at(TokenKind::rbrace)) {
            const Token& name_tok = expect(TokenKind::string, "objective name string");
            expect(TokenKind::fat_arrow, "'=>' in objective");
            const Token& dir_tok = expect(TokenKind::identifier, "objective direction");

            ObjectiveSpec obj;
            if (name_tok.text == "cost") obj.name = ObjectiveName::cost;
            else if (name_tok.text == "performance") obj.name = ObjectiveName::performance;
            else if (name_tok.text == "availability") obj.name = ObjectiveName::availability;
            else fail("unknown objective '" + name_tok.text + "'", name_tok);

            if (dir_tok.text == "min") obj.direction = Direction::minimize;
            else if (dir_tok.text == "max") obj.direction = Direction::maximize;
            else fail("objective direction must be 'min' or 'max'", dir_tok);

            for (const auto& existing : spec.objectives)
                if (existing.name == obj.name)
                    fail("duplicate objective '" + name_tok.text + "'", name_tok);
            if (spec.objectives.size() == 3)
                fail("more than three objectives declared", name_tok);
            spec.objectives.push_back(obj);
        }
        expect(TokenKind::rbrace, "'}'");
    }

    void parse_requirements(OptimizationSpec& spec) {
        expect(TokenKind::lbrace, "'{' after nonfunctional_requirements");
        while (!at(TokenKind::rbrace)) {
            const Token& id_tok = expect(TokenKind::identifier, "requirement id");
            const Token& first = expect(TokenKind::string, "requirement description string");

            if (at_keyword("max") || at_keyword("min")) {
                const Token& kind_tok = advance();
                const Token& value_tok = expect(TokenKind::number, "bound threshold");
                expect(TokenKind::fat_arrow, "'=>' in requirement");
                const Token& target_tok = expect(TokenKind::string, "bound target string");
                AggregateBound bound;
                bound.id = id_tok.text;
                bound.description = first.text;
                bound.kind = kind_tok.text == "max" ? BoundKind::max : BoundKind::min;
                bound.threshold = value_tok.number;
                if (!std::isfinite(bound.threshold))
                    fail("bound threshold must be finite", value_tok);
                if (target_tok.text == "cost") bound.target = BoundTarget::cost;
                else if (target_tok.text == "availability") bound.target = BoundTarget::availability;
                else if (target_tok.text == "performance") bound.target = BoundTarget::performance;
                else {
                    warn("requirement '" + id_tok.text + "' targets unknown property '" +
                             target_tok.text + "'; ignored",
                         target_tok);
                    continue;
                }
                spec.requirements.emplace_back(std::move(bound));
            } else if (at_keyword("values")) {
                advance();
                const Token& values_tok = expect(TokenKind::string, "allowed values string");
                expect(TokenKind::fat_arrow, "'=>' in requirement");
                const Token& target_tok = expect(TokenKind::string, "match target string");
                CategoricalMatch match;
                match.id = id_tok.text;
                match.description = first.text;
                match.allowed = detail::split_csv(values_tok.text);
                if (match.allowed.empty())
                    fail("requirement '" + id_tok.text + "' has an empty values list", values_tok);
                if (target_tok.text == "provider") match.target = MatchTarget::provider;
                else if (target_tok.text == "region") match.target = MatchTarget::region;
                else {
                    warn("requirement '" + id_tok.text + "' targets unknown property '" +
                             target_tok.text + "'; ignored",
                         target_tok);
                    continue;
                }
                spec.requirements.emplace_back(std::move(match));
            } else if (at(TokenKind::fat_arrow)) {
                advance();
                const Token& value_tok = expect(TokenKind::string, "requirement value string");
                KeyValue kv{id_tok.text, first.text, value_tok.text};
                if (kv.key == "elements" && detail::split_csv(kv.value).empty())
                    fail("'elements' requirement has an empty value", value_tok);
                if (kv.key == "max_VM_memory" && !detail::parse_positive_real(kv.value))
                    fail("'max_VM_memory' value must be a positive real", value_tok);
                spec.requirements.emplace_back(std::move(kv));
            } else {
                fail("malformed requirement body after \"" + first.text +
                         "\": expected 'max', 'min', 'values' or '=>'",
                     peek());
            }
        }
        expect(TokenKind::rbrace, "'}'");
    }

    SolutionRecord parse_solution_block() {
        SolutionRecord sol;
        sol.name = expect(TokenKind::identifier, "solution name").text;
        expect(TokenKind::lbrace, "'{' after solution name");
        expect_keyword("objectives");
        expect(TokenKind::lbrace, "'{' after objectives");
        while (!at(TokenKind::rbrace)) {
            ObjectiveValue ov;
            ov.name = expect(TokenKind::identifier, "objective name").text;
            ov.value = expect(TokenKind::number, "objective value").number;
            if (at(TokenKind::percent)) {
                advance();
                ov.unit = "%";
            } else {
                ov.unit = expect(TokenKind::identifier, "objective unit").text;
            }
            sol.objective_values.push_back(std::move(ov));
        }
        expect(TokenKind::rbrace, "'}'");
        expect_keyword("decisions");
        expect(TokenKind::lbracket, "'[' after decisions");
        while (!at(TokenKind::rbracket)) {
            sol.decisions.push_back(expect(TokenKind::string, "decision id string").text);
            if (at(TokenKind::comma)) advance();
        }
        expect(TokenKind::rbracket, "']'");
        expect(TokenKind::rbrace, "'}'");
        return sol;
    }

    // -- infrastructure details ---------------------------------------------

    Network parse_network() {
        Network net;
        net.name = expect(TokenKind::identifier, "net name").text;
        expect(TokenKind::lbrace, "'{' after net name");
        while (!at(TokenKind::rbrace)) {
            if (at_keyword("cidr")) {
                advance();
                net.cidr = expect(TokenKind::string, "cidr string").text;
            } else if (at_keyword("protocol")) {
                advance();
                net.protocol = expect(TokenKind::string, "protocol string").text;
            } else if (at_keyword("subnet")) {
                advance();
                net.subnets.push_back(parse_subnet());
            } else {
                fail("unknown net property, got " + detail::describe(peek()), peek());
            }
        }
        expect(TokenKind::rbrace, "'}'");
        return net;
    }

    Subnet parse_subnet() {
        Subnet sn;
        sn.name = expect(TokenKind::identifier, "subnet name").text;
        expect(TokenKind::lbrace, "'{' after subnet name");
        while (!at(TokenKind::rbrace)) {
            if (at_keyword("cidr")) {
                advance();
                sn.cidr = expect(TokenKind::string, "cidr string").text;
            } else if (at_keyword("connections")) {
                advance();
                expect(TokenKind::lbrace, "'{' after connections");
                while (!at(TokenKind::rbrace)) {
                    sn.connections.push_back(
                        expect(TokenKind::identifier, "connection name").text);
                    if (at(TokenKind::comma)) advance();
                }
                expect(TokenKind::rbrace, "'}'");
            } else {
                fail("unknown subnet property, got " + detail::describe(peek()), peek());
            }
        }
        expect(TokenKind::rbrace, "'}'");
        return sn;
    }

    VirtualMachine parse_vm(std::vector<std::pair<std::string, Token>>& iface_refs) {
        VirtualMachine vm;
        vm.name = expect(TokenKind::identifier, "vm name").text;
        expect(TokenKind::lbrace, "'{' after vm name");
        while (!at(TokenKind::rbrace)) {
            if (at_keyword("os")) {
                advance();
                vm.os = expect(TokenKind::string, "os string").text;
            } else if (at_keyword("iface")) {
                advance();
                Iface iface;
                iface.name = expect(TokenKind::identifier, "iface name").text;
                expect(TokenKind::lbrace, "'{' after iface name");
                expect_keyword("belongs_to");
                const Token& ref = expect(TokenKind::identifier, "subnet reference");
                iface.subnet = ref.text;
                iface_refs.emplace_back(ref.text, ref);
                expect(TokenKind::rbrace, "'}'");
                vm.ifaces.push_back(std::move(iface));
            } else if (at_keyword("sto")) {
                advance();
                const Token& sto = expect(TokenKind::string, "storage size string");
                auto gb = detail::parse_positive_real(sto.text);
                if (!gb) fail("'sto' value must be a positive real", sto);
                vm.storage_gb = *gb;
            } else {
                fail("unknown vm property, got " + detail::describe(peek()), peek());
            }
        }
        expect(TokenKind::rbrace, "'}'");
        return vm;
    }

    VmImageDecl parse_vm_image(std::vector<std::pair<std::string, Token>>& image_refs) {
        VmImageDecl img;
        img.name = expect(TokenKind::identifier, "vm_image name").text;
        expect(TokenKind::lbrace, "'{' after vm_image name");
        expect_keyword("generates");
        const Token& ref = expect(TokenKind::identifier, "generated vm name");
        img.generates = ref.text;
        image_refs.emplace_back(ref.text, ref);
        expect(TokenKind::rbrace, "'}'");
        return img;
    }

    AutoscaleGroup parse_autoscale_group(std::vector<std::pair<std::string, Token>>& iface_refs) {
        AutoscaleGroup asg;
        asg.name = expect(TokenKind::identifier, "autoscale_group name").text;
        expect(TokenKind::lbrace, "'{' after autoscale_group name");
        bool seen_vm = false, seen_min = false, seen_max = false;
        Token min_tok, max_tok;
        while (!at(TokenKind::rbrace)) {
            if (at_keyword("vm")) {
                if (seen_vm) fail("duplicate vm in autoscale_group", peek());
                seen_vm = true;
                advance();
                asg.vm = parse_vm(iface_refs);
            } else if (at_keyword("min")) {
                advance();
                min_tok = expect(TokenKind::number, "min instance count");
                asg.min_instances = static_cast<int>(min_tok.number);
                seen_min = true;
            } else if (at_keyword("max")) {
                advance();
                max_tok = expect(TokenKind::number, "max instance count");
                asg.max_instances = static_cast<int>(max_tok.number);
                seen_max = true;
            } else {
                fail("unknown autoscale_group property, got " + detail::describe(peek()), peek());
            }
        }
        const Token& close = expect(TokenKind::rbrace, "'}'");
        if (!seen_vm) fail("autoscale_group without a vm", close);
        if (seen_min && (min_tok.number < 0 || min_tok.number != asg.min_instances))
            fail("autoscale_group min must be a non-negative integer", min_tok);
        if (seen_max && max_tok.number != asg.max_instances)
            fail("autoscale_group max must be an integer", max_tok);
        if (seen_min && seen_max && asg.max_instances < asg.min_instances)
            fail("autoscale_group max is below min", max_tok);
        return asg;
    }

    void validate_infrastructure(const InfrastructureModel& model,
                                 const std::vector<std::pair<std::string, Token>>& iface_refs,
                                 const std::vector<std::pair<std::string, Token>>& image_refs) {
        auto check_unique = [&](const std::vector<std::string>& names, const char* kind) {
            std::set<std::string> seen;
            for (const auto& n : names)
                if (!seen.insert(n).second)
                    throw ParseError(std::string("duplicate ") + kind + " name '" + n + "'", 1, 1);
        };
        std::vector<std::string> net_names, subnet_names, vm_names, image_names, asg_names;
        for (const auto& net : model.networks) {
            net_names.push_back(net.name);
            for (const auto& sn : net.subnets) subnet_names.push_back(sn.name);
        }
        for (const auto& vm : model.vms) vm_names.push_back(vm.name);
        for (const auto& asg : model.autoscale_groups) {
            asg_names.push_back(asg.name);
            vm_names.push_back(asg.vm.name);
        }
        for (const auto& img : model.vm_images) image_names.push_back(img.name);
        check_unique(net_names, "net");
        check_unique(subnet_names, "subnet");
        check_unique(vm_names, "vm");
        check_unique(image_names, "vm_image");
        check_unique(asg_names, "autoscale_group");

        for (const auto& [name, tok] : iface_refs)
            if (!model.has_subnet(name))
                throw ParseError("iface belongs_to unknown subnet '" + name + "'", tok.line,
                                 tok.column);
        for (const auto& [name, tok] : image_refs)
            if (!model.has_vm(name))
                throw ParseError("vm_image generates unknown vm '" + name + "'", tok.line,
                                 tok.column);
    }

    // -- concrete details ----------------------------------------------------

    std::vector<Property> parse_properties() {
        std::vector<Property> props;
        expect(TokenKind::lbrace, "'{' after properties");
        while (!at(TokenKind::rbrace)) {
            Property p;
            p.key = expect(TokenKind::identifier, "property key").text;
            expect(TokenKind::equals, "'=' in property");
            if (at(TokenKind::string)) {
                p.value = advance().text;
            } else if (at(TokenKind::number)) {
                p.value = advance().number;
            } else {
                fail("property value must be a string or number, got " + detail::describe(peek()),
                     peek());
            }
            props.push_back(std::move(p));
        }
        expect(TokenKind::rbrace, "'}'");
        return props;
    }

    ProviderBlock parse_provider_block() {
        ProviderBlock pb;
        pb.provider = expect(TokenKind::identifier, "provider name").text;
        expect(TokenKind::lbrace, "'{' after provider name");
        while (!at(TokenKind::rbrace)) {
            expect_keyword("storage");
            ConcreteStorage st;
            st.name = expect(TokenKind::identifier, "storage name").text;
            expect(TokenKind::lbrace, "'{' after storage name");
            expect_keyword("properties");
            st.properties = parse_properties();
            expect(TokenKind::rbrace, "'}'");
            pb.storages.push_back(std::move(st));
        }
        expect(TokenKind::rbrace, "'}'");
        return pb;
    }

    ConcreteVm parse_concrete_vm() {
        ConcreteVm vm;
        vm.name = expect(TokenKind::identifier, "vm name").text;
        expect(TokenKind::lbrace, "'{' after vm name");
        expect_keyword("properties");
        vm.properties = parse_properties();
        if (at_keyword("maps")) {
            advance();
            vm.maps = expect(TokenKind::identifier, "maps target").text;
        }
        expect(TokenKind::rbrace, "'}'");
        return vm;
    }

    // -- raw block capture ----------------------------------------------------

    RawBlock parse_raw_block() {
        const Token& start = peek();
        std::size_t begin_offset = start.offset;
        // consume tokens up to the opening brace
        while (!at(TokenKind::lbrace)) {
            if (at(TokenKind::end_of_input))
                fail("unknown top-level block without a body", start);
            advance();
        }
        advance();  // '{'
        int depth = 1;
        while (depth > 0) {
            if (at(TokenKind::end_of_input))
                fail("unbalanced braces in block starting here", start);
            const Token& t = advance();
            if (t.kind == TokenKind::lbrace) ++depth;
            if (t.kind == TokenKind::rbrace) --depth;
        }
        const Token& close = tokens_[pos_ - 1];
        std::size_t end_offset = close.offset + 1;
        return RawBlock{std::string(source_.substr(begin_offset, end_offset - begin_offset))};
    }

    std::string_view source_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> warnings_;
};

/// Parses a full DOML document (any mix of optimization, infrastructure and
/// concrete layers plus unknown blocks, which are preserved verbatim).
inline Document parse_document(std::string_view text) {
    return Parser(text).parse_document();
}

/// Parses a single `optimization <name> { ... }` block.
inline OptimizationSpec parse_optimization_layer(std::string_view text) {
    Parser parser(text);
    Document doc = parser.parse_document();
    if (!doc.optimization)
        throw ParseError("input does not contain an optimization block", 1, 1);
    return *doc.optimization;
}

}  // namespace iacopt::doml
