#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "otquant/errors.hpp"

namespace otquant::topo {

/// Purdue reference levels; enum order is the total order L0 < ... < L5.
enum class PurdueLevel { L0, L1, L2, L3, L3_5, L4, L5 };

enum class AssetKind {
    Firewall, Historian, JumpHost, Workstation, Hmi, Scada, Plc, Rtu, Sis,
    Sensor, Actuator, Dcs, Broker, TimeServer, Ca
};

enum class Domain { Safety, Control, Enterprise };

enum class Protocol { OpcUa, Profinet, Dnp3Sa, Iec104, Iec61850, Ptp, Ntp, TlsVpn, Modbus };

enum class ConduitPolicy { HybridPinned, ClassicalAllowed, Unauthenticated };

struct Asset {
    std::string id;
    PurdueLevel level = PurdueLevel::L0;
    AssetKind kind = AssetKind::Workstation;
    Domain domain = Domain::Control;
    std::string trust_anchor;
    std::set<std::string> crypto_profile;
    // Scenario flavor (IP addresses, hostnames, roles); never routable values.
    std::map<std::string, std::string> annotations;
};

/// Conduits are stored with src/dst but treated as bidirectional edges for
/// path search; level monotonicity constrains traversal direction.
struct Conduit {
    std::string src;
    std::string dst;
    Protocol protocol = Protocol::OpcUa;
    int mtu_bytes = 1500;
    double rtt_ms = 0.0;
    ConduitPolicy policy = ConduitPolicy::ClassicalAllowed;
};

struct TrustAnchor {
    std::string id;
    std::string algorithm;  // must exist in the crypto catalog
    std::set<Domain> domains_covered;
};

/// Immutable after build; concurrent reads are safe.
class Topology {
public:
    std::string name;
    std::vector<Asset> assets;
    std::vector<Conduit> conduits;
    std::vector<TrustAnchor> anchors;

    const Asset& asset(std::string_view id) const;
    bool has_asset(std::string_view id) const;
};

/// Parses and validates a topology config document (JSON text). Throws
/// ConfigError with a location for syntax errors and with the offending
/// identifier for dangling references.
Topology build_from_config(const std::string& json_text);
Topology build_from_config_file(const std::string& path);

/// Built-in reference topologies: "scar-reference" and "dawn-reference".
const Topology& builtin_topology(std::string_view name);

/// Fraction of safety-domain assets whose trust anchor also anchors at least
/// one control-domain asset. Throws UndefinedMetricError when the topology
/// has no safety assets.
double shared_trust_fraction(const Topology& t);

struct EscalationPath {
    std::vector<std::string> asset_ids;
};

/// All simple paths from an asset at level `from` to an asset at level `to`
/// whose level sequence is non-increasing (lateral movement within a level is
/// allowed). Requires from > to; returns an empty list when no path exists.
std::vector<EscalationPath> escalation_paths(const Topology& t, PurdueLevel from, PurdueLevel to);

bool operator<(PurdueLevel a, PurdueLevel b);

std::string_view to_string(PurdueLevel l);
std::string_view to_string(AssetKind k);
std::string_view to_string(Domain d);
std::string_view to_string(Protocol p);
std::string_view to_string(ConduitPolicy p);

PurdueLevel parse_level(std::string_view s);

}  // namespace otquant::topo
