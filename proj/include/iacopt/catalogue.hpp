#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "iacopt/doml/ast.hpp"

namespace iacopt::catalogue {

class CatalogueError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ElementType { vm, storage };

inline std::string to_string(ElementType type) {
    return type == ElementType::vm ? "VM" : "Storage";
}

inline std::optional<ElementType> element_type_from_string(std::string_view s) {
    if (s == "VM") return ElementType::vm;
    if (s == "Storage") return ElementType::storage;
    return std::nullopt;
}

/// One purchasable infrastructure element.
struct CatalogueElement {
    std::string id;
    ElementType element_type;
    std::string provider;
    std::string region;
    double cost = 0.0;          // currency units per deployment period
    double availability = 0.0;  // percent, [0, 100]
    double performance = 0.0;   // dimensionless metric
    std::optional<double> memory_gb;  // required for VM elements

    bool operator==(const CatalogueElement&) const = default;
};

struct ProviderImage {
    std::string provider;
    std::string image_name;

    bool operator==(const ProviderImage&) const = default;
};

struct Catalogue {
    std::vector<CatalogueElement> elements;
    std::vector<ProviderImage> vm_images;

    bool operator==(const Catalogue&) const = default;

    const CatalogueElement* find(std::string_view id) const {
        for (const auto& e : elements)
            if (e.id == id) return &e;
        return nullptr;
    }
};

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline double require_number(const nlohmann::json& obj, const char* key, const std::string& id) {
    if (!obj.contains(key))
        throw CatalogueError("element '" + id + "' is missing field '" + key + "'");
    if (!obj[key].is_number())
        throw CatalogueError("element '" + id + "' field '" + key + "' must be a number");
    return obj[key].get<double>();
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& id) {
    if (!obj.contains(key))
        throw CatalogueError("element '" + id + "' is missing field '" + key + "'");
    if (!obj[key].is_string())
        throw CatalogueError("element '" + id + "' field '" + key + "' must be a string");
    return obj[key].get<std::string>();
}

}  // namespace detail

/// Parses and validates a catalogue from its JSON text.
inline Catalogue parse_catalogue(const std::string& json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw CatalogueError(std::string("catalogue is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("elements") || !root["elements"].is_array())
        throw CatalogueError("catalogue must be an object with an 'elements' array");

    Catalogue cat;
    std::set<std::string> ids;
    for (const auto& item : root["elements"]) {
        if (!item.is_object()) throw CatalogueError("catalogue element must be an object");
        CatalogueElement e;
        e.id = detail::require_string(item, "id", "<unnamed>");
        if (!ids.insert(e.id).second)
            throw CatalogueError("duplicate element id '" + e.id + "'");

        std::string type = detail::require_string(item, "element_type", e.id);
        auto parsed_type = element_type_from_string(type);
        if (!parsed_type)
            throw CatalogueError("element '" + e.id + "' has unknown element_type '" + type +
                                 "' (expected \"VM\" or \"Storage\")");
        e.element_type = *parsed_type;
        e.provider = detail::require_string(item, "provider", e.id);
        e.region = detail::require_string(item, "region", e.id);
        e.cost = detail::require_number(item, "cost", e.id);
        e.availability = detail::require_number(item, "availability", e.id);
        e.performance = detail::require_number(item, "performance", e.id);
        if (e.cost < 0)
            throw CatalogueError("element '" + e.id + "' has negative cost");
        if (e.availability < 0 || e.availability > 100)
            throw CatalogueError("element '" + e.id + "' availability " +
                                 std::to_string(e.availability) + " is outside [0, 100]");
        if (e.performance < 0)
            throw CatalogueError("element '" + e.id + "' has negative performance");
        if (item.contains("memory_gb")) {
            if (!item["memory_gb"].is_number())
                throw CatalogueError("element '" + e.id + "' field 'memory_gb' must be a number");
            e.memory_gb = item["memory_gb"].get<double>();
            if (*e.memory_gb <= 0)
                throw CatalogueError("element '" + e.id + "' memory_gb must be positive");
        }
        if (e.element_type == ElementType::vm && !e.memory_gb)
            throw CatalogueError("VM element '" + e.id + "' is missing 'memory_gb'");
        cat.elements.push_back(std::move(e));
    }

    if (root.contains("vm_images")) {
        if (!root["vm_images"].is_array())
            throw CatalogueError("'vm_images' must be an array");
        std::set<std::string> providers;
        for (const auto& item : root["vm_images"]) {
            ProviderImage img;
            img.provider = detail::require_string(item, "provider", "<vm_image>");
            img.image_name = detail::require_string(item, "image_name", img.provider);
            if (!providers.insert(detail::lower(img.provider)).second)
                throw CatalogueError("multiple images for provider '" + img.provider + "'");
            cat.vm_images.push_back(std::move(img));
        }
    }
    return cat;
}

/// Loads the catalogue file (see README for the schema).
inline Catalogue load_catalogue(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CatalogueError("cannot read catalogue file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_catalogue(buf.str());
}

/// Matchmaking pre-filter: keeps elements of `type` that satisfy every
/// categorical requirement (provider/region, case-insensitive) and, for VMs,
/// every max_VM_memory cap. Aggregate bounds constrain whole configurations
/// and are not applied here.
inline std::vector<CatalogueElement> filter_candidates(
    const Catalogue& cat, ElementType type, const std::vector<doml::Requirement>& requirements) {
    std::vector<std::vector<std::string>> provider_sets;
    std::vector<std::vector<std::string>> region_sets;
    std::vector<double> memory_caps;
    for (const auto& req : requirements) {
        if (const auto* match = std::get_if<doml::CategoricalMatch>(&req)) {
            std::vector<std::string> folded;
            folded.reserve(match->allowed.size());
            for (const auto& v : match->allowed) folded.push_back(detail::lower(v));
            if (match->target == doml::MatchTarget::provider)
                provider_sets.push_back(std::move(folded));
            else
                region_sets.push_back(std::move(folded));
        } else if (const auto* kv = std::get_if<doml::KeyValue>(&req)) {
            if (kv->key == "max_VM_memory") memory_caps.push_back(std::stod(kv->value));
        }
    }

    auto in_set = [](const std::vector<std::string>& set, const std::string& value) {
        return std::find(set.begin(), set.end(), detail::lower(value)) != set.end();
    };

    std::vector<CatalogueElement> out;
    for (const auto& e : cat.elements) {
        if (e.element_type != type) continue;
        bool ok = true;
        for (const auto& set : provider_sets)
            if (!in_set(set, e.provider)) { ok = false; break; }
        if (ok)
            for (const auto& set : region_sets)
                if (!in_set(set, e.region)) { ok = false; break; }
        if (ok && e.element_type == ElementType::vm) {
            double memory = e.memory_gb.value_or(0.0);
            for (double cap : memory_caps)
                if (memory > cap) { ok = false; break; }
        }
        if (ok) out.push_back(e);
    }
    return out;
}

/// Image registered for a provider, if any (case-insensitive provider match).
inline std::optional<std::string> lookup_image(const Catalogue& cat, std::string_view provider) {
    std::string folded = detail::lower(provider);
    for (const auto& img : cat.vm_images)
        if (detail::lower(img.provider) == folded) return img.image_name;
    return std::nullopt;
}

}  // namespace iacopt::catalogue
