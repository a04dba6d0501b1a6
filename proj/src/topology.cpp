#include "otquant/topology.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "otquant/catalog.hpp"

namespace otquant::topo {

using nlohmann::json;

bool operator<(PurdueLevel a, PurdueLevel b) {
    return static_cast<int>(a) < static_cast<int>(b);
}

std::string_view to_string(PurdueLevel l) {
    switch (l) {
        case PurdueLevel::L0: return "L0";
        case PurdueLevel::L1: return "L1";
        case PurdueLevel::L2: return "L2";
        case PurdueLevel::L3: return "L3";
        case PurdueLevel::L3_5: return "L3.5";
        case PurdueLevel::L4: return "L4";
        case PurdueLevel::L5: return "L5";
    }
    return "?";
}

PurdueLevel parse_level(std::string_view s) {
    if (s == "L0") return PurdueLevel::L0;
    if (s == "L1") return PurdueLevel::L1;
    if (s == "L2") return PurdueLevel::L2;
    if (s == "L3") return PurdueLevel::L3;
    if (s == "L3.5" || s == "L3_5") return PurdueLevel::L3_5;
    if (s == "L4") return PurdueLevel::L4;
    if (s == "L5") return PurdueLevel::L5;
    throw ConfigError("unknown Purdue level: " + std::string(s));
}

namespace {

const std::map<std::string, AssetKind>& kind_names() {
    static const std::map<std::string, AssetKind> m = {
        {"firewall", AssetKind::Firewall},   {"historian", AssetKind::Historian},
        {"jump-host", AssetKind::JumpHost},  {"workstation", AssetKind::Workstation},
        {"hmi", AssetKind::Hmi},             {"scada", AssetKind::Scada},
        {"plc", AssetKind::Plc},             {"rtu", AssetKind::Rtu},
        {"sis", AssetKind::Sis},             {"sensor", AssetKind::Sensor},
        {"actuator", AssetKind::Actuator},   {"dcs", AssetKind::Dcs},
        {"broker", AssetKind::Broker},       {"time-server", AssetKind::TimeServer},
        {"ca", AssetKind::Ca}};
    return m;
}

const std::map<std::string, Protocol>& protocol_names() {
    static const std::map<std::string, Protocol> m = {
        {"opcua", Protocol::OpcUa},     {"profinet", Protocol::Profinet},
        {"dnp3-sa", Protocol::Dnp3Sa},  {"iec104", Protocol::Iec104},
        {"iec61850", Protocol::Iec61850}, {"ptp", Protocol::Ptp},
        {"ntp", Protocol::Ntp},         {"tls-vpn", Protocol::TlsVpn},
        {"modbus", Protocol::Modbus}};
    return m;
}

const std::map<std::string, Domain>& domain_names() {
    static const std::map<std::string, Domain> m = {
        {"safety", Domain::Safety}, {"control", Domain::Control}, {"enterprise", Domain::Enterprise}};
    return m;
}

const std::map<std::string, ConduitPolicy>& policy_names() {
    static const std::map<std::string, ConduitPolicy> m = {
        {"hybrid-pinned", ConduitPolicy::HybridPinned},
        {"classical-allowed", ConduitPolicy::ClassicalAllowed},
        {"unauthenticated", ConduitPolicy::Unauthenticated}};
    return m;
}

template <typename T>
T parse_enum(const std::map<std::string, T>& names, const std::string& s, const char* what) {
    auto it = names.find(s);
    if (it == names.end()) throw ConfigError(std::string("unknown ") + what + ": " + s);
    return it->second;
}

/// Purdue-convention default: enterprise above the DMZ, control below, safety
/// for SIS. Overridable per asset in config.
Domain default_domain(PurdueLevel level, AssetKind kind) {
    if (kind == AssetKind::Sis) return Domain::Safety;
    if (level < PurdueLevel::L3_5) return Domain::Control;
    return Domain::Enterprise;
}

void validate(const Topology& t) {
    if (t.assets.empty()) throw ConfigError("no assets");

    std::unordered_set<std::string> asset_ids, anchor_ids;
    for (const auto& a : t.anchors) {
        if (!anchor_ids.insert(a.id).second) throw ConfigError("duplicate anchor id: " + a.id);
        if (!catalog::builtin_catalog().contains(a.algorithm)) {
            throw ConfigError("anchor " + a.id + " references unknown algorithm: " + a.algorithm);
        }
    }
    for (const auto& a : t.assets) {
        if (!asset_ids.insert(a.id).second) throw ConfigError("duplicate asset id: " + a.id);
        if (!anchor_ids.count(a.trust_anchor)) {
            throw ConfigError("dangling trust-anchor reference: " + a.trust_anchor +
                              " (asset " + a.id + ")");
        }
        if ((a.kind == AssetKind::Sensor || a.kind == AssetKind::Actuator) &&
            a.level != PurdueLevel::L0) {
            throw ConfigError("asset " + a.id + ": sensors/actuators only at L0");
        }
        if (a.kind == AssetKind::Sis && a.level != PurdueLevel::L1) {
            throw ConfigError("asset " + a.id + ": SIS assets belong at L1");
        }
        for (const auto& alg : a.crypto_profile) {
            if (!catalog::builtin_catalog().contains(alg)) {
                throw ConfigError("asset " + a.id + " references unknown algorithm: " + alg);
            }
        }
    }
    for (const auto& c : t.conduits) {
        if (c.src == c.dst) throw ConfigError("conduit endpoints must differ: " + c.src);
        if (!asset_ids.count(c.src)) throw ConfigError("dangling conduit reference: " + c.src);
        if (!asset_ids.count(c.dst)) throw ConfigError("dangling conduit reference: " + c.dst);
        if (c.mtu_bytes < 576) {
            throw ConfigError("conduit " + c.src + "->" + c.dst + ": mtu_bytes below 576");
        }
        if (c.rtt_ms < 0) {
            throw ConfigError("conduit " + c.src + "->" + c.dst + ": negative rtt_ms");
        }
    }
}

Topology from_json(const json& doc) {
    Topology t;
    t.name = doc.value("name", "");
    if (doc.contains("anchors")) {
        for (const auto& j : doc.at("anchors")) {
            TrustAnchor a;
            a.id = j.at("id").get<std::string>();
            a.algorithm = j.at("algorithm").get<std::string>();
            for (const auto& d : j.value("domains", json::array())) {
                a.domains_covered.insert(parse_enum(domain_names(), d.get<std::string>(), "domain"));
            }
            t.anchors.push_back(std::move(a));
        }
    }
    if (doc.contains("assets")) {
        for (const auto& j : doc.at("assets")) {
            Asset a;
            a.id = j.at("id").get<std::string>();
            a.level = parse_level(j.at("level").get<std::string>());
            a.kind = parse_enum(kind_names(), j.at("kind").get<std::string>(), "asset kind");
            a.trust_anchor = j.at("trust_anchor").get<std::string>();
            if (j.contains("domain")) {
                a.domain = parse_enum(domain_names(), j.at("domain").get<std::string>(), "domain");
            } else {
                a.domain = default_domain(a.level, a.kind);
            }
            for (const auto& alg : j.value("crypto_profile", json::array())) {
                a.crypto_profile.insert(alg.get<std::string>());
            }
            if (j.contains("annotations")) {
                for (auto it = j.at("annotations").begin(); it != j.at("annotations").end(); ++it) {
                    a.annotations[it.key()] = it.value().get<std::string>();
                }
            }
            t.assets.push_back(std::move(a));
        }
    }
    if (doc.contains("conduits")) {
        for (const auto& j : doc.at("conduits")) {
            Conduit c;
            c.src = j.at("src").get<std::string>();
            c.dst = j.at("dst").get<std::string>();
            c.protocol = parse_enum(protocol_names(), j.at("protocol").get<std::string>(), "protocol");
            c.mtu_bytes = j.value("mtu_bytes", 1500);
            c.rtt_ms = j.value("rtt_ms", 0.0);
            c.policy = parse_enum(policy_names(), j.value("policy", "classical-allowed"), "policy");
            t.conduits.push_back(std::move(c));
        }
    }
    validate(t);
    return t;
}

Asset mk_asset(std::string id, PurdueLevel level, AssetKind kind, std::string anchor,
               std::set<std::string> profile,
               std::map<std::string, std::string> annotations = {},
               std::optional<Domain> domain = std::nullopt) {
    Asset a;
    a.id = std::move(id);
    a.level = level;
    a.kind = kind;
    a.trust_anchor = std::move(anchor);
    a.crypto_profile = std::move(profile);
    a.annotations = std::move(annotations);
    a.domain = domain ? *domain : default_domain(a.level, a.kind);
    return a;
}

Conduit mk_conduit(std::string src, std::string dst, Protocol p, double rtt,
                   ConduitPolicy policy = ConduitPolicy::ClassicalAllowed, int mtu = 1500) {
    Conduit c;
    c.src = std::move(src);
    c.dst = std::move(dst);
    c.protocol = p;
    c.mtu_bytes = mtu;
    c.rtt_ms = rtt;
    c.policy = policy;
    return c;
}

Topology build_scar_reference() {
    using K = AssetKind;
    using P = Protocol;
    const std::string root = "NPP-CA-Root-2016";
    Topology t;
    t.name = "scar-reference";
    t.anchors.push_back({root, "RSA-2048", {Domain::Safety, Domain::Control, Domain::Enterprise}});

    t.assets = {
        mk_asset("vendor-cloud", PurdueLevel::L5, K::Workstation, root, {"RSA-2048"},
                 {{"role", "vendor update distribution"}}),
        mk_asset("vendor-portal", PurdueLevel::L4, K::Workstation, root, {"RSA-2048"},
                 {{"role", "business vendor portal"}}),
        mk_asset("dmz-fw", PurdueLevel::L3_5, K::Firewall, root, {"RSA-2048", "AES-256"}),
        mk_asset("dmz-historian", PurdueLevel::L3_5, K::Historian, root, {"RSA-2048", "SHA-256"},
                 {{"ip", "172.16.3.45"}, {"role", "HNDL collection point"}}),
        mk_asset("dmz-jump", PurdueLevel::L3_5, K::JumpHost, root, {"RSA-2048"},
                 {{"role", "jump server (host)"}}),
        mk_asset("dmz-ca", PurdueLevel::L3_5, K::Ca, root, {"RSA-2048"},
                 {{"role", "plant PKI root"}}),
        mk_asset("ops-fw", PurdueLevel::L3, K::Firewall, root, {"RSA-2048", "AES-256"}),
        mk_asset("eng-ws", PurdueLevel::L3, K::Workstation, root, {"RSA-2048", "ECC-256"},
                 {{"role", "engineering workstation"}}),
        mk_asset("ops-historian", PurdueLevel::L3, K::Historian, root, {"RSA-2048", "SHA-256"}),
        mk_asset("ctl-scada", PurdueLevel::L2, K::Scada, root, {"RSA-2048", "ECC-256"}),
        mk_asset("ctl-hmi", PurdueLevel::L2, K::Hmi, root, {"RSA-2048"}),
        mk_asset("ctl-jump", PurdueLevel::L2, K::JumpHost, root, {"RSA-2048"},
                 {{"role", "jump server (remote)"}}),
        mk_asset("ptp-gm", PurdueLevel::L2, K::TimeServer, root, {"SHA-256"},
                 {{"role", "PTP grandmaster"}}),
        mk_asset("plc-a", PurdueLevel::L1, K::Plc, root, {"ECC-256"}),
        mk_asset("rtu-a", PurdueLevel::L1, K::Rtu, root, {"ECC-256"}),
        mk_asset("dcs-ctrl", PurdueLevel::L1, K::Dcs, root, {"RSA-2048"}),
        mk_asset("sis-a", PurdueLevel::L1, K::Sis, root, {"RSA-2048"},
                 {{"role", "Triconex SIS, shared PKI"}}),
        mk_asset("sensor-a", PurdueLevel::L0, K::Sensor, root, {}),
        mk_asset("actuator-a", PurdueLevel::L0, K::Actuator, root, {}),
    };

    t.conduits = {
        mk_conduit("vendor-cloud", "vendor-portal", P::TlsVpn, 20.0),
        mk_conduit("vendor-portal", "dmz-fw", P::TlsVpn, 10.0),
        mk_conduit("dmz-fw", "dmz-historian", P::OpcUa, 2.0),
        mk_conduit("dmz-historian", "dmz-jump", P::TlsVpn, 1.0),
        mk_conduit("dmz-fw", "dmz-ca", P::TlsVpn, 1.0),
        // Single bidirectional conduit between the two jump hosts.
        mk_conduit("dmz-jump", "ctl-jump", P::TlsVpn, 2.0),
        mk_conduit("dmz-jump", "ops-fw", P::TlsVpn, 2.0),
        mk_conduit("ops-fw", "eng-ws", P::OpcUa, 1.0),
        mk_conduit("eng-ws", "ops-historian", P::OpcUa, 1.0),
        mk_conduit("ops-historian", "ctl-scada", P::OpcUa, 1.0),
        mk_conduit("ctl-jump", "ctl-scada", P::OpcUa, 1.0),
        mk_conduit("ctl-scada", "ctl-hmi", P::OpcUa, 1.0),
        mk_conduit("ctl-scada", "plc-a", P::Profinet, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("plc-a", "rtu-a", P::Profinet, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("plc-a", "dcs-ctrl", P::Profinet, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("dcs-ctrl", "sis-a", P::Profinet, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("rtu-a", "sensor-a", P::Profinet, 0.2, ConduitPolicy::Unauthenticated),
        mk_conduit("rtu-a", "actuator-a", P::Profinet, 0.2, ConduitPolicy::Unauthenticated),
        mk_conduit("ptp-gm", "ctl-scada", P::Ptp, 0.1, ConduitPolicy::Unauthenticated),
        mk_conduit("ptp-gm", "sis-a", P::Ptp, 0.1, ConduitPolicy::Unauthenticated),
    };
    validate(t);
    return t;
}

Topology build_dawn_reference() {
    using K = AssetKind;
    using P = Protocol;
    const std::string root = "NPP-SA-ROOT-2018";
    Topology t;
    t.name = "dawn-reference";
    t.anchors.push_back({root, "RSA-2048", {Domain::Safety, Domain::Control, Domain::Enterprise}});

    t.assets = {
        mk_asset("internet-gw", PurdueLevel::L5, K::Workstation, root, {"RSA-2048"},
                 {{"role", "phishing campaign entry"}}),
        mk_asset("mail-gw", PurdueLevel::L4, K::Workstation, root, {"RSA-2048"},
                 {{"role", "email gateway"}}),
        mk_asset("dmz-fw", PurdueLevel::L3_5, K::Firewall, root, {"RSA-2048", "AES-256"}),
        mk_asset("dmz-switch", PurdueLevel::L3_5, K::Broker, root, {"RSA-2048"},
                 {{"role", "DMZ switch (port mirror)"}, {"model", "Cisco IE-4000"}}),
        mk_asset("ews-102", PurdueLevel::L3, K::Workstation, root, {"RSA-2048", "ECC-256"},
                 {{"role", "engineering workstation EWS-102"}}),
        mk_asset("dcs-historian", PurdueLevel::L2, K::Historian, root, {"RSA-2048", "SHA-256"},
                 {{"ip", "172.16.5.21"}, {"role", "DCS historian"}}),
        mk_asset("dcs-ctrl", PurdueLevel::L2, K::Dcs, root, {"RSA-2048"},
                 {{"role", "Emerson Ovation DCS"}}),
        mk_asset("ptp-gm", PurdueLevel::L2, K::TimeServer, root, {"SHA-256"},
                 {{"role", "PTP grandmaster"}}),
        mk_asset("sis-plc-04", PurdueLevel::L1, K::Sis, root, {"RSA-2048"},
                 {{"role", "SIS controller SIS-PLC-04"}}),
        mk_asset("control-rods", PurdueLevel::L0, K::Actuator, root, {},
                 {{"role", "control rod drive"}}),
        mk_asset("pressure-sensor", PurdueLevel::L0, K::Sensor, root, {},
                 {{"role", "core pressure sensing"}}),
    };

    t.conduits = {
        mk_conduit("internet-gw", "mail-gw", P::TlsVpn, 25.0),
        mk_conduit("mail-gw", "dmz-fw", P::TlsVpn, 10.0),
        mk_conduit("dmz-fw", "dmz-switch", P::TlsVpn, 1.0),
        mk_conduit("dmz-switch", "ews-102", P::OpcUa, 2.0),
        mk_conduit("ews-102", "dcs-historian", P::OpcUa, 1.0),
        mk_conduit("dcs-historian", "dcs-ctrl", P::OpcUa, 1.0),
        mk_conduit("dcs-ctrl", "sis-plc-04", P::Dnp3Sa, 1.0),
        mk_conduit("sis-plc-04", "control-rods", P::Iec61850, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("sis-plc-04", "pressure-sensor", P::Iec61850, 0.5, ConduitPolicy::Unauthenticated),
        mk_conduit("ptp-gm", "dcs-ctrl", P::Ptp, 0.1, ConduitPolicy::Unauthenticated),
        mk_conduit("ptp-gm", "sis-plc-04", P::Ptp, 0.1, ConduitPolicy::Unauthenticated),
    };
    validate(t);
    return t;
}

}  // namespace

const Asset& Topology::asset(std::string_view id) const {
    for (const auto& a : assets) {
        if (a.id == id) return a;
    }
    throw ConfigError("no such asset: " + std::string(id));
}

bool Topology::has_asset(std::string_view id) const {
    return std::any_of(assets.begin(), assets.end(),
                       [&](const Asset& a) { return a.id == id; });
}

Topology build_from_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        return from_json(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }
}

Topology build_from_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return build_from_config(ss.str());
}

const Topology& builtin_topology(std::string_view name) {
    static const Topology scar = build_scar_reference();
    static const Topology dawn = build_dawn_reference();
    if (name == "scar-reference") return scar;
    if (name == "dawn-reference") return dawn;
    throw ConfigError("unknown built-in topology: " + std::string(name));
}

double shared_trust_fraction(const Topology& t) {
    std::unordered_map<std::string, bool> anchors_control;
    for (const auto& a : t.assets) {
        if (a.domain == Domain::Control) anchors_control[a.trust_anchor] = true;
    }
    int safety = 0, shared = 0;
    for (const auto& a : t.assets) {
        if (a.domain != Domain::Safety) continue;
        ++safety;
        if (anchors_control.count(a.trust_anchor)) ++shared;
    }
    if (safety == 0) throw UndefinedMetricError("shared_trust_fraction undefined: no safety assets");
    return static_cast<double>(shared) / static_cast<double>(safety);
}

std::vector<EscalationPath> escalation_paths(const Topology& t, PurdueLevel from, PurdueLevel to) {
    if (!(to < from)) {
        throw DomainError("escalation_paths requires from > to (descending attack)");
    }

    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < t.assets.size(); ++i) index[t.assets[i].id] = i;
    std::vector<std::vector<size_t>> adj(t.assets.size());
    for (const auto& c : t.conduits) {
        size_t s = index.at(c.src), d = index.at(c.dst);
        adj[s].push_back(d);
        adj[d].push_back(s);
    }
    for (auto& n : adj) std::sort(n.begin(), n.end());

    std::vector<EscalationPath> out;
    std::vector<size_t> stack;
    std::vector<char> visited(t.assets.size(), 0);

    std::function<void(size_t)> dfs = [&](size_t cur) {
        const auto& a = t.assets[cur];
        if (a.level == to) {
            EscalationPath p;
            for (size_t i : stack) p.asset_ids.push_back(t.assets[i].id);
            out.push_back(std::move(p));
            // A path may continue laterally within the target level, but a
            // completed descent is reported as soon as it reaches `to`.
            return;
        }
        for (size_t next : adj[cur]) {
            if (visited[next]) continue;
            if (a.level < t.assets[next].level) continue;  // must be non-increasing
            visited[next] = 1;
            stack.push_back(next);
            dfs(next);
            stack.pop_back();
            visited[next] = 0;
        }
    };

    for (size_t i = 0; i < t.assets.size(); ++i) {
        if (t.assets[i].level != from) continue;
        visited[i] = 1;
        stack.push_back(i);
        dfs(i);
        stack.pop_back();
        visited[i] = 0;
    }
    return out;
}

std::string_view to_string(AssetKind k) {
    switch (k) {
        case AssetKind::Firewall: return "firewall";
        case AssetKind::Historian: return "historian";
        case AssetKind::JumpHost: return "jump-host";
        case AssetKind::Workstation: return "workstation";
        case AssetKind::Hmi: return "hmi";
        case AssetKind::Scada: return "scada";
        case AssetKind::Plc: return "plc";
        case AssetKind::Rtu: return "rtu";
        case AssetKind::Sis: return "sis";
        case AssetKind::Sensor: return "sensor";
        case AssetKind::Actuator: return "actuator";
        case AssetKind::Dcs: return "dcs";
        case AssetKind::Broker: return "broker";
        case AssetKind::TimeServer: return "time-server";
        case AssetKind::Ca: return "ca";
    }
    return "?";
}

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::Safety: return "safety";
        case Domain::Control: return "control";
        case Domain::Enterprise: return "enterprise";
    }
    return "?";
}

std::string_view to_string(Protocol p) {
    switch (p) {
        case Protocol::OpcUa: return "opcua";
        case Protocol::Profinet: return "profinet";
        case Protocol::Dnp3Sa: return "dnp3-sa";
        case Protocol::Iec104: return "iec104";
        case Protocol::Iec61850: return "iec61850";
        case Protocol::Ptp: return "ptp";
        case Protocol::Ntp: return "ntp";
        case Protocol::TlsVpn: return "tls-vpn";
        case Protocol::Modbus: return "modbus";
    }
    return "?";
}

std::string_view to_string(ConduitPolicy p) {
    switch (p) {
        case ConduitPolicy::HybridPinned: return "hybrid-pinned";
        case ConduitPolicy::ClassicalAllowed: return "classical-allowed";
        case ConduitPolicy::Unauthenticated: return "unauthenticated";
    }
    return "?";
}

}  // namespace otquant::topo
