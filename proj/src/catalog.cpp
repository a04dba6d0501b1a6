#include "otquant/catalog.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace otquant::catalog {

namespace {

using SC = std::array<ScGrade, kScVectorCount>;
constexpr ScGrade C = ScGrade::Critical;
constexpr ScGrade P = ScGrade::Partial;
constexpr ScGrade M = ScGrade::Mitigated;
constexpr ScGrade NA = ScGrade::NotApplicable;
constexpr SC kNoScData{NA, NA, NA, NA, NA, NA, NA};

struct LevelStrength {
    int classical;
    int quantum;
};

// Security-level anchors: L1 = AES-128 key search, L2 = SHA-256 collision,
// L3 = AES-192 key search, L5 = AES-256 key search.
LevelStrength strength_for(NistLevel l) {
    switch (l) {
        case NistLevel::L1: return {128, 64};
        case NistLevel::L2: return {128, 85};
        case NistLevel::L3: return {192, 96};
        case NistLevel::L5: return {256, 128};
    }
    return {0, 0};
}

AlgorithmSpec classical_asym(std::string name, int key_bits, int classical) {
    AlgorithmSpec s;
    s.name = std::move(name);
    s.family = Family::Asymmetric;
    s.key_length_bits = key_bits;
    s.classical_strength_bits = classical;
    s.quantum_strength_bits = 0;
    s.fips_status = FipsStatus::Classical;
    return s;
}

AlgorithmSpec symmetric(std::string name, int key_bits) {
    AlgorithmSpec s;
    s.name = std::move(name);
    s.family = Family::SymmetricCipher;
    s.key_length_bits = key_bits;
    s.classical_strength_bits = key_bits;
    s.quantum_strength_bits = key_bits / 2;
    s.fips_status = FipsStatus::Classical;
    return s;
}

AlgorithmSpec hash(std::string name, int digest_bits) {
    AlgorithmSpec s;
    s.name = std::move(name);
    s.family = Family::Hash;
    s.classical_strength_bits = digest_bits / 2;  // collision resistance
    s.quantum_strength_bits = digest_bits / 3;
    s.fips_status = FipsStatus::Classical;
    return s;
}

AlgorithmSpec pqc(std::string name, Family family, NistLevel level, double keygen, double op1,
                  double op2, int pubkey, int artifact, FipsStatus fips, SC sc = kNoScData,
                  std::optional<double> overhead = std::nullopt, std::string note = {}) {
    AlgorithmSpec s;
    s.name = std::move(name);
    s.family = family;
    s.nist_level = level;
    auto ls = strength_for(level);
    s.classical_strength_bits = ls.classical;
    s.quantum_strength_bits = ls.quantum;
    s.keygen_ms = keygen;
    s.op1_ms = op1;
    s.op2_ms = op2;
    s.pubkey_bytes = pubkey;
    s.artifact_bytes = artifact;
    s.fips_status = fips;
    s.sidechannel = sc;
    s.overhead_multiplier = overhead;
    s.deployment_note = std::move(note);
    return s;
}

std::vector<AlgorithmSpec> build_dataset() {
    constexpr auto STD = FipsStatus::Standardized;
    constexpr auto PEND = FipsStatus::Pending;
    std::vector<AlgorithmSpec> v;

    v.push_back(classical_asym("ECC-256", 256, 128));
    v.push_back(classical_asym("ECC-384", 384, 192));
    v.push_back(classical_asym("ECC-521", 521, 260));
    v.push_back(classical_asym("FFDHE-2048", 2048, 112));
    v.push_back(classical_asym("FFDHE-3072", 3072, 128));
    v.push_back(classical_asym("RSA-1024", 1024, 80));
    v.push_back(classical_asym("RSA-2048", 2048, 112));
    v.push_back(classical_asym("RSA-3072", 3072, 128));

    v.push_back(symmetric("AES-128", 128));
    v.push_back(symmetric("AES-192", 192));
    v.push_back(symmetric("AES-256", 256));

    v.push_back(hash("SHA-256", 256));
    v.push_back(hash("SHA-384", 384));
    v.push_back(hash("SHA-512", 512));
    v.push_back(hash("SHA3-256", 256));
    v.push_back(hash("SHA3-384", 384));
    v.push_back(hash("SHA3-512", 512));

    v.push_back(pqc("ML-KEM-512", Family::PqcKem, NistLevel::L1, 0.032, 0.032, 0.022, 800, 768, STD));
    v.push_back(pqc("ML-KEM-768", Family::PqcKem, NistLevel::L3, 0.045, 0.046, 0.041, 1184, 1088,
                    STD, SC{P, M, C, C, C, M, NA}, 34.4, "suitable for L2/L3"));
    v.push_back(pqc("ML-KEM-1024", Family::PqcKem, NistLevel::L5, 0.052, 0.053, 0.047, 1568, 1568, STD));

    v.push_back(pqc("HQC-128", Family::PqcKem, NistLevel::L1, 0.120, 0.201, 0.224, 2249, 4497, PEND));
    v.push_back(pqc("HQC-192", Family::PqcKem, NistLevel::L3, 0.219, 0.381, 0.430, 4522, 9042, PEND,
                    SC{P, C, NA, P, NA, NA, C}, 411.0, "limited deployment"));
    v.push_back(pqc("HQC-256", Family::PqcKem, NistLevel::L5, 0.451, 0.704, 0.748, 7245, 14485, PEND));

    v.push_back(pqc("ML-DSA-44", Family::PqcSignature, NistLevel::L2, 0.039, 0.129, 0.040, 1312, 2420, STD));
    v.push_back(pqc("ML-DSA-65", Family::PqcSignature, NistLevel::L3, 0.053, 0.136, 0.056, 1952, 3293,
                    STD, SC{M, NA, M, M, M, NA, NA}, 59.2, "firmware signing viable"));
    v.push_back(pqc("ML-DSA-87", Family::PqcSignature, NistLevel::L5, 0.083, 0.165, 0.082, 2592, 4595, STD));

    auto falcon512 = pqc("Falcon-512", Family::PqcSignature, NistLevel::L1, 12.69, 0.525, 0.110, 897,
                         666, PEND, SC{M, C, NA, M, NA, NA, M}, 27.2, "compact signatures");
    // Upstream liboqs benchmark tables list the Falcon-512 signature as 690 B;
    // the dataset pins 666 B from its canonical source.
    falcon512.dataset_note = "signature size pinned at 666 B; liboqs benchmark tables list 690 B";
    v.push_back(std::move(falcon512));
    v.push_back(pqc("Falcon-1024", Family::PqcSignature, NistLevel::L5, 34.21, 1.003, 0.199, 1793, 1280, PEND));

    v.push_back(pqc("SLH-DSA-128f", Family::PqcSignature, NistLevel::L1, 1.155, 28.111, 3.093, 32, 17088, STD));
    v.push_back(pqc("SLH-DSA-128s", Family::PqcSignature, NistLevel::L1, 66.406, 497.387, 1.133, 32,
                    7856, STD, SC{M, NA, M, NA, NA, NA, NA}, 122.8, "archival only"));
    v.push_back(pqc("SLH-DSA-192f", Family::PqcSignature, NistLevel::L3, 1.562, 45.656, 4.596, 48, 35664, STD));
    v.push_back(pqc("SLH-DSA-192s", Family::PqcSignature, NistLevel::L3, 95.411, 945.129, 1.656, 48, 16224, STD));
    v.push_back(pqc("SLH-DSA-256f", Family::PqcSignature, NistLevel::L5, 4.203, 92.525, 4.788, 64, 49856, STD));
    v.push_back(pqc("SLH-DSA-256s", Family::PqcSignature, NistLevel::L5, 60.923, 753.914, 2.375, 64, 29792, STD));

    return v;
}

// Single-frame check used by the KEM deployment rules: default stack overhead
// plus the ciphertext must fit one standard Ethernet frame.
bool fits_single_frame(const AlgorithmSpec& s) {
    constexpr int kDefaultOverhead = 79;
    constexpr int kEthernetMtu = 1500;
    return s.artifact_bytes && *s.artifact_bytes + kDefaultOverhead <= kEthernetMtu;
}

bool is_archival_only(const AlgorithmSpec& s) {
    // The SLH-DSA family as a class is confined to archival signing.
    return s.deployment_note == "archival only" || s.name.rfind("SLH-DSA", 0) == 0;
}

}  // namespace

const Catalog& builtin_catalog() {
    static const Catalog cat = [] {
        Catalog c;
        c.entries_ = build_dataset();
        return c;
    }();
    return cat;
}

const AlgorithmSpec& Catalog::lookup(std::string_view name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return e;
    }
    throw UnknownAlgorithmError(std::string(name));
}

bool Catalog::contains(std::string_view name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const AlgorithmSpec& e) { return e.name == name; });
}

int quantum_strength(const AlgorithmSpec& spec) {
    return spec.quantum_strength_bits;
}

int hash_quantum_resistance(int n_bits, HashAttack mode) {
    if (n_bits < 224 || n_bits > 1024 || n_bits % 8 != 0) {
        throw DomainError("hash size out of range: " + std::to_string(n_bits) +
                          " (expected multiple of 8 in [224, 1024])");
    }
    return mode == HashAttack::Collision ? n_bits / 3 : n_bits / 2;
}

Suitability deployment_suitability(const AlgorithmSpec& spec, DeploymentContext context) {
    const bool has_metadata =
        spec.overhead_multiplier || spec.keygen_ms || spec.op1_ms || spec.op2_ms;
    const bool classical = spec.fips_status == FipsStatus::Classical;

    // Classical symmetric primitives and hashes carry no timing rows; judge
    // them on quantum strength alone.
    if (classical) {
        if (spec.family == Family::Asymmetric) {
            return {Verdict::Excluded, "no quantum security; requires migration"};
        }
        if (spec.quantum_strength_bits >= 128) {
            return {Verdict::Suitable, "quantum strength " +
                                           std::to_string(spec.quantum_strength_bits) + " bits"};
        }
        return {Verdict::Conditional,
                "quantum strength " + std::to_string(spec.quantum_strength_bits) +
                    " bits; upgrade to a 256-bit variant"};
    }

    if (!has_metadata) {
        return {Verdict::Conditional, "insufficient metadata"};
    }

    const bool archival_only = is_archival_only(spec);

    switch (context) {
        case DeploymentContext::ControlLoopL0L2:
            if (spec.family == Family::PqcKem) {
                return {Verdict::Excluded, "on-path handshakes prohibited in control loops"};
            }
            if (archival_only) return {Verdict::Excluded, "archival only"};
            return {Verdict::Conditional, "boot-time verification only; no on-path signing"};

        case DeploymentContext::Archival:
            if (spec.family == Family::PqcSignature) {
                return {Verdict::Suitable, "archival signing"};
            }
            return {Verdict::Conditional, "archival context expects signature algorithms"};

        case DeploymentContext::SupervisoryL2L3:
        case DeploymentContext::PerimeterL35:
            if (archival_only) return {Verdict::Excluded, "archival only"};
            if (spec.family == Family::PqcKem && !fits_single_frame(spec)) {
                if (context == DeploymentContext::PerimeterL35) {
                    return {Verdict::Excluded, "ciphertext exceeds a single Ethernet frame"};
                }
                return {Verdict::Conditional, "ciphertext requires fragmentation"};
            }
            if (spec.deployment_note == "limited deployment") {
                return {Verdict::Conditional, "limited deployment"};
            }
            if (spec.fips_status == FipsStatus::Pending) {
                return {Verdict::Conditional, "pending standardization"};
            }
            if (!spec.deployment_note.empty()) {
                return {Verdict::Suitable, spec.deployment_note};
            }
            return {Verdict::Suitable, "standardized; fits deployment constraints"};
    }
    return {Verdict::Conditional, "insufficient metadata"};
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::Asymmetric: return "asymmetric";
        case Family::SymmetricCipher: return "symmetric-cipher";
        case Family::Hash: return "hash";
        case Family::PqcKem: return "pqc-kem";
        case Family::PqcSignature: return "pqc-signature";
    }
    return "?";
}

std::string_view to_string(NistLevel l) {
    switch (l) {
        case NistLevel::L1: return "L1";
        case NistLevel::L2: return "L2";
        case NistLevel::L3: return "L3";
        case NistLevel::L5: return "L5";
    }
    return "?";
}

std::string_view to_string(FipsStatus s) {
    switch (s) {
        case FipsStatus::Standardized: return "standardized";
        case FipsStatus::Pending: return "pending";
        case FipsStatus::Classical: return "classical";
    }
    return "?";
}

std::string_view to_string(ScVector v) {
    switch (v) {
        case ScVector::FA: return "FA";
        case ScVector::SPA: return "SPA";
        case ScVector::APA: return "APA";
        case ScVector::EM: return "EM";
        case ScVector::TMP: return "TMP";
        case ScVector::CB: return "CB";
        case ScVector::TA: return "TA";
    }
    return "?";
}

std::string_view to_string(ScGrade g) {
    switch (g) {
        case ScGrade::Critical: return "Critical";
        case ScGrade::Partial: return "Partial";
        case ScGrade::Mitigated: return "Mitigated";
        case ScGrade::NotApplicable: return "NotApplicable";
    }
    return "?";
}

std::string_view to_string(DeploymentContext c) {
    switch (c) {
        case DeploymentContext::ControlLoopL0L2: return "control-loop-L0L2";
        case DeploymentContext::SupervisoryL2L3: return "supervisory-L2L3";
        case DeploymentContext::PerimeterL35: return "perimeter-L3.5";
        case DeploymentContext::Archival: return "archival";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Suitable: return "suitable";
        case Verdict::Conditional: return "conditional";
        case Verdict::Excluded: return "excluded";
    }
    return "?";
}

namespace {

std::string fmt_opt(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string fmt_opt(const std::optional<double>& v) {
    if (!v) return {};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", *v);
    return buf;
}

std::string sidechannel_cell(const AlgorithmSpec& s) {
    static constexpr char kLetters[] = {'C', 'P', 'M', '-'};
    std::string out;
    for (int i = 0; i < kScVectorCount; ++i) {
        if (i) out += '|';
        out += std::string(to_string(static_cast<ScVector>(i)));
        out += ':';
        out += kLetters[static_cast<int>(s.sidechannel[i])];
    }
    return out;
}

}  // namespace

std::string to_csv(const Catalog& cat) {
    std::ostringstream os;
    os << "name,family,key_length_bits,classical_strength_bits,quantum_strength_bits,"
          "keygen_ms,op1_ms,op2_ms,pubkey_bytes,artifact_bytes,secret_key_bytes,"
          "nist_level,overhead_multiplier,sidechannel,fips_status\n";
    for (const auto& e : cat.entries()) {
        os << e.name << ',' << to_string(e.family) << ',' << fmt_opt(e.key_length_bits) << ','
           << e.classical_strength_bits << ',' << e.quantum_strength_bits << ','
           << fmt_opt(e.keygen_ms) << ',' << fmt_opt(e.op1_ms) << ',' << fmt_opt(e.op2_ms) << ','
           << fmt_opt(e.pubkey_bytes) << ',' << fmt_opt(e.artifact_bytes) << ','
           << fmt_opt(e.secret_key_bytes) << ','
           << (e.nist_level ? std::string(to_string(*e.nist_level)) : std::string()) << ','
           << fmt_opt(e.overhead_multiplier) << ',' << sidechannel_cell(e) << ','
           << to_string(e.fips_status) << '\n';
    }
    return os.str();
}

std::string to_table(const Catalog& cat) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %-16s %5s %5s %5s %9s %9s %9s %8s %9s %-5s %8s %-12s\n",
                  "name", "family", "key", "cls", "qnt", "keygen", "op1", "op2", "pubkey",
                  "artifact", "lvl", "ovh", "fips");
    os << line;
    for (const auto& e : cat.entries()) {
        const std::string family(to_string(e.family));
        const std::string key = fmt_opt(e.key_length_bits);
        const std::string keygen = fmt_opt(e.keygen_ms);
        const std::string op1 = fmt_opt(e.op1_ms);
        const std::string op2 = fmt_opt(e.op2_ms);
        const std::string pubkey = fmt_opt(e.pubkey_bytes);
        const std::string artifact = fmt_opt(e.artifact_bytes);
        const std::string lvl = e.nist_level ? std::string(to_string(*e.nist_level)) : std::string();
        const std::string ovh = fmt_opt(e.overhead_multiplier);
        const std::string fips(to_string(e.fips_status));
        std::snprintf(line, sizeof(line),
                      "%-14s %-16s %5s %5d %5d %9s %9s %9s %8s %9s %-5s %8s %-12s\n",
                      e.name.c_str(), family.c_str(), key.c_str(), e.classical_strength_bits,
                      e.quantum_strength_bits, keygen.c_str(), op1.c_str(), op2.c_str(),
                      pubkey.c_str(), artifact.c_str(), lvl.c_str(), ovh.c_str(), fips.c_str());
        os << line;
    }
    return os.str();
}

}  // namespace otquant::catalog
