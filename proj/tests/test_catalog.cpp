#include <doctest.h>

#include <sstream>

#include "otquant/catalog.hpp"

using namespace otquant;
using namespace otquant::catalog;

TEST_CASE("lookup returns the dataset row") {
    const auto& cat = builtin_catalog();

    const auto& mlkem = cat.lookup("ML-KEM-768");
    CHECK(mlkem.keygen_ms == doctest::Approx(0.045));
    CHECK(mlkem.op1_ms == doctest::Approx(0.046));
    CHECK(mlkem.op2_ms == doctest::Approx(0.041));
    CHECK(*mlkem.pubkey_bytes == 1184);
    CHECK(*mlkem.artifact_bytes == 1088);
    CHECK(*mlkem.nist_level == NistLevel::L3);
    CHECK(mlkem.fips_status == FipsStatus::Standardized);

    const auto& falcon = cat.lookup("Falcon-512");
    CHECK(*falcon.pubkey_bytes == 897);
    CHECK(*falcon.artifact_bytes == 666);
    CHECK(falcon.keygen_ms == doctest::Approx(12.69));
    CHECK(!falcon.dataset_note.empty());  // 690 B discrepancy recorded
}

TEST_CASE("lookup of an unknown name raises a naming error") {
    CHECK_THROWS_WITH_AS(builtin_catalog().lookup("NoSuchAlg"),
                         "unknown algorithm: NoSuchAlg", UnknownAlgorithmError);
}

TEST_CASE("quantum strength column") {
    const auto& cat = builtin_catalog();
    CHECK(quantum_strength(cat.lookup("RSA-2048")) == 0);
    CHECK(quantum_strength(cat.lookup("AES-128")) == 64);
    CHECK(quantum_strength(cat.lookup("SHA-256")) == 85);
}

TEST_CASE("strength rules hold across the dataset") {
    for (const auto& e : builtin_catalog().entries()) {
        CAPTURE(e.name);
        CHECK(e.quantum_strength_bits <= e.classical_strength_bits);
        if (e.family == Family::Asymmetric) {
            CHECK(e.fips_status == FipsStatus::Classical);
            CHECK(e.quantum_strength_bits == 0);
        }
        if (e.family == Family::SymmetricCipher) {
            CHECK(e.quantum_strength_bits * 2 == e.classical_strength_bits);
        }
        if (e.family == Family::Hash) {
            const int digest_bits = e.classical_strength_bits * 2;
            CHECK(e.quantum_strength_bits == digest_bits / 3);
        }
        if (e.keygen_ms) CHECK(*e.keygen_ms > 0);
        if (e.op1_ms) CHECK(*e.op1_ms > 0);
        if (e.op2_ms) CHECK(*e.op2_ms > 0);
        if (e.pubkey_bytes) CHECK(*e.pubkey_bytes > 0);
        if (e.artifact_bytes) CHECK(*e.artifact_bytes > 0);
        if (e.overhead_multiplier) CHECK(*e.overhead_multiplier > 0);
    }
}

TEST_CASE("hash table values match the n/3 rule") {
    const auto& cat = builtin_catalog();
    CHECK(cat.lookup("SHA-256").quantum_strength_bits == 85);
    CHECK(cat.lookup("SHA-384").quantum_strength_bits == 128);
    CHECK(cat.lookup("SHA-512").quantum_strength_bits == 170);
    CHECK(cat.lookup("SHA3-256").quantum_strength_bits == 85);
    CHECK(cat.lookup("SHA3-384").quantum_strength_bits == 128);
    CHECK(cat.lookup("SHA3-512").quantum_strength_bits == 170);
}

TEST_CASE("hash quantum resistance") {
    CHECK(hash_quantum_resistance(256, HashAttack::Collision) == 85);
    CHECK(hash_quantum_resistance(384, HashAttack::Collision) == 128);
    CHECK(hash_quantum_resistance(512, HashAttack::Preimage) == 256);
    CHECK_THROWS_AS(hash_quantum_resistance(128, HashAttack::Collision), DomainError);
    CHECK_THROWS_AS(hash_quantum_resistance(1032, HashAttack::Preimage), DomainError);
    CHECK_THROWS_AS(hash_quantum_resistance(250, HashAttack::Collision), DomainError);
}

TEST_CASE("deployment suitability follows the dataset notes") {
    const auto& cat = builtin_catalog();

    auto s = deployment_suitability(cat.lookup("ML-KEM-768"), DeploymentContext::SupervisoryL2L3);
    CHECK(s.verdict == Verdict::Suitable);

    s = deployment_suitability(cat.lookup("SLH-DSA-128s"), DeploymentContext::PerimeterL35);
    CHECK(s.verdict == Verdict::Excluded);
    CHECK(s.reason == "archival only");

    s = deployment_suitability(cat.lookup("SLH-DSA-128s"), DeploymentContext::Archival);
    CHECK(s.verdict == Verdict::Suitable);
}

TEST_CASE("control loops are closed to on-path handshakes") {
    for (const auto& e : builtin_catalog().entries()) {
        if (e.family != Family::PqcKem) continue;
        CAPTURE(e.name);
        auto s = deployment_suitability(e, DeploymentContext::ControlLoopL0L2);
        CHECK(s.verdict == Verdict::Excluded);
    }
    // Classical asymmetric handshake algorithms are excluded everywhere.
    auto rsa = deployment_suitability(builtin_catalog().lookup("RSA-2048"),
                                      DeploymentContext::PerimeterL35);
    CHECK(rsa.verdict == Verdict::Excluded);
}

TEST_CASE("suitability is total and deterministic over catalog x contexts") {
    const DeploymentContext contexts[] = {
        DeploymentContext::ControlLoopL0L2, DeploymentContext::SupervisoryL2L3,
        DeploymentContext::PerimeterL35, DeploymentContext::Archival};
    for (const auto& e : builtin_catalog().entries()) {
        for (auto c : contexts) {
            auto a = deployment_suitability(e, c);
            auto b = deployment_suitability(e, c);
            CHECK(a.verdict == b.verdict);
            CHECK(a.reason == b.reason);
            CHECK(!a.reason.empty());
        }
    }
}

TEST_CASE("csv carries the field order and every row") {
    const std::string csv = to_csv(builtin_catalog());
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "name,family,key_length_bits,classical_strength_bits,quantum_strength_bits,"
          "keygen_ms,op1_ms,op2_ms,pubkey_bytes,artifact_bytes,secret_key_bytes,"
          "nist_level,overhead_multiplier,sidechannel,fips_status");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == builtin_catalog().entries().size());
    CHECK(csv.find("ML-KEM-768,pqc-kem") != std::string::npos);
}

TEST_CASE("side-channel grades of the profiled rows") {
    const auto& mlkem = builtin_catalog().lookup("ML-KEM-768");
    CHECK(mlkem.grade(ScVector::FA) == ScGrade::Partial);
    CHECK(mlkem.grade(ScVector::APA) == ScGrade::Critical);
    CHECK(mlkem.grade(ScVector::TA) == ScGrade::NotApplicable);
    CHECK(*mlkem.overhead_multiplier == doctest::Approx(34.4));

    const auto& falcon = builtin_catalog().lookup("Falcon-512");
    CHECK(falcon.grade(ScVector::SPA) == ScGrade::Critical);
    CHECK(*falcon.overhead_multiplier == doctest::Approx(27.2));

    const auto& hqc = builtin_catalog().lookup("HQC-192");
    CHECK(hqc.grade(ScVector::TA) == ScGrade::Critical);
    CHECK(*hqc.overhead_multiplier == doctest::Approx(411.0));
}
