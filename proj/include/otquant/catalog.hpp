#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "otquant/errors.hpp"

namespace otquant::catalog {

enum class Family { Asymmetric, SymmetricCipher, Hash, PqcKem, PqcSignature };

enum class NistLevel { L1, L2, L3, L5 };

enum class FipsStatus { Standardized, Pending, Classical };

/// Side-channel attack vectors, in dataset column order.
enum class ScVector { FA, SPA, APA, EM, TMP, CB, TA };
inline constexpr int kScVectorCount = 7;

/// C = no effective countermeasure, P = significant gaps remain,
/// M = effective countermeasures available, NotApplicable = not reported.
enum class ScGrade { Critical, Partial, Mitigated, NotApplicable };

struct AlgorithmSpec {
    std::string name;
    Family family = Family::Asymmetric;
    std::optional<int> key_length_bits;
    int classical_strength_bits = 0;
    int quantum_strength_bits = 0;
    std::optional<double> keygen_ms;
    std::optional<double> op1_ms;  // encrypt / sign
    std::optional<double> op2_ms;  // decrypt / verify
    std::optional<int> pubkey_bytes;
    std::optional<int> artifact_bytes;  // ciphertext or signature
    std::optional<int> secret_key_bytes;
    std::optional<NistLevel> nist_level;
    std::optional<double> overhead_multiplier;  // vs classical baseline
    std::array<ScGrade, kScVectorCount> sidechannel{
        ScGrade::NotApplicable, ScGrade::NotApplicable, ScGrade::NotApplicable,
        ScGrade::NotApplicable, ScGrade::NotApplicable, ScGrade::NotApplicable,
        ScGrade::NotApplicable};
    FipsStatus fips_status = FipsStatus::Classical;
    std::string deployment_note;  // dataset deployment annotation, may be empty
    std::string dataset_note;     // provenance remark, may be empty

    ScGrade grade(ScVector v) const { return sidechannel[static_cast<int>(v)]; }
};

enum class DeploymentContext { ControlLoopL0L2, SupervisoryL2L3, PerimeterL35, Archival };

enum class Verdict { Suitable, Conditional, Excluded };

struct Suitability {
    Verdict verdict = Verdict::Conditional;
    std::string reason;
};

enum class HashAttack { Collision, Preimage };

class Catalog {
public:
    const std::vector<AlgorithmSpec>& entries() const { return entries_; }

    /// Exact-name lookup; throws UnknownAlgorithmError naming the query.
    const AlgorithmSpec& lookup(std::string_view name) const;

    bool contains(std::string_view name) const;

private:
    friend const Catalog& builtin_catalog();
    std::vector<AlgorithmSpec> entries_;
};

/// The embedded dataset. Immutable after first use; safe for concurrent reads.
const Catalog& builtin_catalog();

/// Quantum security strength in bits: 0 for classical asymmetric algorithms,
/// half the key exponent for symmetric ciphers, floor(n/3) of the digest size
/// for hash collision resistance. Total over the catalog.
int quantum_strength(const AlgorithmSpec& spec);

/// Quantum resistance of an n-bit hash: collision floor(n/3), preimage n/2.
/// n must be a multiple of 8 in [224, 1024].
int hash_quantum_resistance(int n_bits, HashAttack mode);

/// Deterministic deployment verdict for one algorithm in one context.
/// Contexts needing on-path handshakes are closed to KEMs and classical
/// asymmetric algorithms below L2; verdicts for the profiled PQC rows follow
/// their dataset deployment notes.
Suitability deployment_suitability(const AlgorithmSpec& spec, DeploymentContext context);

std::string_view to_string(Family f);
std::string_view to_string(NistLevel l);
std::string_view to_string(FipsStatus s);
std::string_view to_string(ScVector v);
std::string_view to_string(ScGrade g);
std::string_view to_string(DeploymentContext c);
std::string_view to_string(Verdict v);

/// CSV rendering of the whole dataset, columns in AlgorithmSpec field order.
std::string to_csv(const Catalog& cat);

/// Fixed-width human table of the dataset.
std::string to_table(const Catalog& cat);

}  // namespace otquant::catalog
