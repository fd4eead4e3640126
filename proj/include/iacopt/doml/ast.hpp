#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace iacopt::doml {

/// Parse failure with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int column)
        : std::runtime_error(std::move(message)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Non-fatal parse diagnostic (e.g. a requirement with an unknown target).
struct Diagnostic {
    std::string message;
    int line = 0;
    int column = 0;
};

// ---------------------------------------------------------------------------
// Optimization layer
// ---------------------------------------------------------------------------

enum class ObjectiveName { cost, performance, availability };
enum class Direction { minimize, maximize };

std::string to_string(ObjectiveName name);

inline std::string to_string(ObjectiveName name) {
    switch (name) {
    case ObjectiveName::cost: return "cost";
    case ObjectiveName::performance: return "performance";
    case ObjectiveName::availability: return "availability";
    }
    return "?";
}

struct ObjectiveSpec {
    ObjectiveName name;
    Direction direction;

    bool operator==(const ObjectiveSpec&) const = default;
};

enum class BoundKind { max, min };

/// Aggregate properties a bound or an objective can target.
enum class BoundTarget { cost, availability, performance };

inline std::string to_string(BoundTarget target) {
    switch (target) {
    case BoundTarget::cost: return "cost";
    case BoundTarget::availability: return "availability";
    case BoundTarget::performance: return "performance";
    }
    return "?";
}

/// Whole-configuration bound, e.g. `req1 "cost <= 300" max 300.0 => "cost"`.
struct AggregateBound {
    std::string id;
    std::string description;
    BoundKind kind;
    double threshold = 0.0;
    BoundTarget target;

    bool operator==(const AggregateBound&) const = default;
};

enum class MatchTarget { provider, region };

inline std::string to_string(MatchTarget target) {
    return target == MatchTarget::provider ? "provider" : "region";
}

/// Per-element categorical requirement, e.g. `req3 "Provider" values "aws" => "provider"`.
struct CategoricalMatch {
    std::string id;
    std::string description;
    std::vector<std::string> allowed;
    MatchTarget target;

    bool operator==(const CategoricalMatch&) const = default;
};

/// Bare key/value requirement; covers `"max_VM_memory" => "1024"` and
/// `"elements" => "VM, Storage"`.
struct KeyValue {
    std::string id;
    std::string key;
    std::string value;

    bool operator==(const KeyValue&) const = default;
};

using Requirement = std::variant<AggregateBound, CategoricalMatch, KeyValue>;

/// One rendered objective value inside a `solution` block.
struct ObjectiveValue {
    std::string name;
    double value = 0.0;
    std::string unit;

    bool operator==(const ObjectiveValue&) const = default;
};

/// A `solution sol<k> { objectives {...} decisions [...] }` block.
struct SolutionRecord {
    std::string name;
    std::vector<ObjectiveValue> objective_values;
    std::vector<std::string> decisions;

    bool operator==(const SolutionRecord&) const = default;
};

struct OptimizationSpec {
    std::string name;
    std::vector<ObjectiveSpec> objectives;
    std::vector<Requirement> requirements;
    std::size_t priority = 0;  // index into objectives; first declared objective
    std::vector<SolutionRecord> solutions;

    bool operator==(const OptimizationSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Infrastructure layer
// ---------------------------------------------------------------------------

struct Subnet {
    std::string name;
    std::string cidr;
    std::vector<std::string> connections;

    bool operator==(const Subnet&) const = default;
};

struct Network {
    std::string name;
    std::string cidr;
    std::string protocol;
    std::vector<Subnet> subnets;

    bool operator==(const Network&) const = default;
};

struct Iface {
    std::string name;
    std::string subnet;

    bool operator==(const Iface&) const = default;
};

struct VirtualMachine {
    std::string name;
    std::string os;
    std::vector<Iface> ifaces;
    std::optional<double> storage_gb;

    bool operator==(const VirtualMachine&) const = default;
};

struct VmImageDecl {
    std::string name;
    std::string generates;

    bool operator==(const VmImageDecl&) const = default;
};

struct AutoscaleGroup {
    std::string name;
    VirtualMachine vm;
    int min_instances = 0;
    int max_instances = 0;

    bool operator==(const AutoscaleGroup&) const = default;
};

struct InfrastructureModel {
    std::string name;
    std::vector<Network> networks;
    std::vector<VirtualMachine> vms;
    std::vector<VmImageDecl> vm_images;
    std::vector<AutoscaleGroup> autoscale_groups;

    bool operator==(const InfrastructureModel&) const = default;

    /// All VM names visible for `generates` references, including VMs embedded
    /// in autoscale groups.
    bool has_vm(const std::string& name_) const {
        for (const auto& vm : vms)
            if (vm.name == name_) return true;
        for (const auto& asg : autoscale_groups)
            if (asg.vm.name == name_) return true;
        return false;
    }

    bool has_subnet(const std::string& name_) const {
        for (const auto& net : networks)
            for (const auto& sn : net.subnets)
                if (sn.name == name_) return true;
        return false;
    }
};

// ---------------------------------------------------------------------------
// Concretization layer
// ---------------------------------------------------------------------------

using PropertyValue = std::variant<std::string, double>;

struct Property {
    std::string key;
    PropertyValue value;

    bool operator==(const Property&) const = default;
};

struct ConcreteStorage {
    std::string name;
    std::vector<Property> properties;

    bool operator==(const ConcreteStorage&) const = default;
};

struct ProviderBlock {
    std::string provider;
    std::vector<ConcreteStorage> storages;

    bool operator==(const ProviderBlock&) const = default;
};

struct ConcreteVm {
    std::string name;
    std::vector<Property> properties;
    std::optional<std::string> maps;

    bool operator==(const ConcreteVm&) const = default;
};

struct ConcreteNet {
    std::string name;
    std::string maps;

    bool operator==(const ConcreteNet&) const = default;
};

struct ConcreteImage {
    std::string name;
    std::string image_name;
    std::string maps;

    bool operator==(const ConcreteImage&) const = default;
};

struct ConcreteAsg {
    std::string name;
    std::vector<Property> properties;
    std::string maps;

    bool operator==(const ConcreteAsg&) const = default;
};

struct ConcreteInfrastructure {
    std::string name;
    std::vector<ProviderBlock> providers;
    std::vector<ConcreteVm> vms;
    std::vector<ConcreteNet> nets;
    std::vector<ConcreteImage> images;
    std::vector<ConcreteAsg> asgs;

    bool operator==(const ConcreteInfrastructure&) const = default;
};

// ---------------------------------------------------------------------------
// Document
// ---------------------------------------------------------------------------

/// Unknown top-level block kept verbatim so re-emission can reproduce it.
struct RawBlock {
    std::string text;

    bool operator==(const RawBlock&) const = default;
};

enum class BlockKind { optimization, infrastructure, concrete, raw };

struct Document {
    std::optional<OptimizationSpec> optimization;
    std::optional<InfrastructureModel> infrastructure;
    std::vector<ConcreteInfrastructure> concrete;
    std::vector<RawBlock> raw_blocks;

    /// Top-level block order; the index addresses `concrete` or `raw_blocks`
    /// for those kinds and is zero for the two singleton layers.
    std::vector<std::pair<BlockKind, std::size_t>> order;

    std::vector<Diagnostic> warnings;

    /// Byte offset of the '}' closing the optimization block in the source
    /// text; std::string::npos when absent. Used to splice solution blocks
    /// into the original text without disturbing the user's formatting.
    std::size_t optimization_close_brace = std::string::npos;

    friend bool operator==(const Document& a, const Document& b) {
        return a.optimization == b.optimization && a.infrastructure == b.infrastructure &&
               a.concrete == b.concrete && a.raw_blocks == b.raw_blocks && a.order == b.order;
    }
};

}  // namespace iacopt::doml
