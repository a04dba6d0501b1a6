#include "otquant/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "otquant/catalog.hpp"
#include "otquant/report.hpp"
#include "otquant/risk.hpp"
#include "otquant/scenario.hpp"
#include "otquant/telemetry.hpp"
#include "otquant/topology.hpp"
#include "otquant/validation.hpp"

namespace otquant::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string output_path;
    std::string format = "json";
    std::uint64_t seed = 42;
    int partitions = 1;
    std::vector<std::string> argv;
};

void emit(const json& doc, const std::string& table_text, const GlobalOpts& g,
          std::ostream& out) {
    const std::string text = g.format == "json" ? rep::dump_report(doc) : table_text;
    if (!g.output_path.empty()) {
        std::ofstream f(g.output_path, std::ios::binary);
        if (!f) throw DomainError("cannot write output file: " + g.output_path);
        f << text;
    } else {
        out << text;
    }
}

json spec_json(const catalog::AlgorithmSpec& s) {
    json j;
    j["name"] = s.name;
    j["family"] = std::string(catalog::to_string(s.family));
    if (s.key_length_bits) j["key_length_bits"] = *s.key_length_bits;
    j["classical_strength_bits"] = s.classical_strength_bits;
    j["quantum_strength_bits"] = s.quantum_strength_bits;
    if (s.keygen_ms) j["keygen_ms"] = *s.keygen_ms;
    if (s.op1_ms) j["op1_ms"] = *s.op1_ms;
    if (s.op2_ms) j["op2_ms"] = *s.op2_ms;
    if (s.pubkey_bytes) j["pubkey_bytes"] = *s.pubkey_bytes;
    if (s.artifact_bytes) j["artifact_bytes"] = *s.artifact_bytes;
    if (s.secret_key_bytes) j["secret_key_bytes"] = *s.secret_key_bytes;
    if (s.nist_level) j["nist_level"] = std::string(catalog::to_string(*s.nist_level));
    if (s.overhead_multiplier) j["overhead_multiplier"] = *s.overhead_multiplier;
    json sc;
    for (int i = 0; i < catalog::kScVectorCount; ++i) {
        sc[std::string(catalog::to_string(static_cast<catalog::ScVector>(i)))] =
            std::string(catalog::to_string(s.sidechannel[i]));
    }
    j["sidechannel"] = sc;
    j["fips_status"] = std::string(catalog::to_string(s.fips_status));
    if (!s.deployment_note.empty()) j["deployment_note"] = s.deployment_note;
    if (!s.dataset_note.empty()) j["dataset_note"] = s.dataset_note;
    return j;
}

int run_catalog(const GlobalOpts& g, const std::string& name, bool format_given,
                std::ostream& out) {
    const auto& cat = catalog::builtin_catalog();
    if (!name.empty()) {
        const auto& spec = cat.lookup(name);
        json doc = spec_json(spec);
        doc["kind"] = "algorithm-spec";
        doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, {}));
        std::ostringstream table;
        table << doc.dump(2) << "\n";
        emit(doc, table.str(), g, out);
        return 0;
    }
    // Without --name the dataset prints as CSV by default, or as a human
    // table with --format table.
    std::string text;
    if (g.format == "table") {
        text = catalog::to_table(cat);
    } else if (g.format == "json" && format_given) {
        json doc;
        doc["kind"] = "catalog";
        doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, {}));
        doc["algorithms"] = json::array();
        for (const auto& e : cat.entries()) doc["algorithms"].push_back(spec_json(e));
        text = rep::dump_report(doc);
    } else {
        text = catalog::to_csv(cat);
    }
    if (!g.output_path.empty()) {
        std::ofstream f(g.output_path, std::ios::binary);
        if (!f) throw DomainError("cannot write output file: " + g.output_path);
        f << text;
    } else {
        out << text;
    }
    return 0;
}

int run_topology_validate(const GlobalOpts& g, const std::string& file, std::ostream& out) {
    topo::Topology t = topo::build_from_config_file(file);
    json doc;
    doc["kind"] = "topology-validation";
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, {file}));
    doc["valid"] = true;
    doc["name"] = t.name;
    doc["assets"] = t.assets.size();
    doc["conduits"] = t.conduits.size();
    doc["anchors"] = t.anchors.size();
    doc["shared_trust_fraction"] = topo::shared_trust_fraction(t);
    std::ostringstream table;
    table << "topology " << t.name << ": valid (" << t.assets.size() << " assets, "
          << t.conduits.size() << " conduits)\n";
    emit(doc, table.str(), g, out);
    return 0;
}

const topo::Topology& resolve_topology(const std::string& ref, topo::Topology& storage,
                                        std::vector<std::string>& input_files) {
    if (ref == "scar-reference" || ref == "dawn-reference") {
        return topo::builtin_topology(ref);
    }
    storage = topo::build_from_config_file(ref);
    input_files.push_back(ref);
    return storage;
}

int run_topology_show(const GlobalOpts& g, const std::string& ref, std::ostream& out) {
    topo::Topology storage;
    std::vector<std::string> inputs;
    const topo::Topology& t = resolve_topology(ref, storage, inputs);
    json doc = rep::to_json(t);
    doc["kind"] = "topology";
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, inputs));
    emit(doc, rep::dump_report(doc), g, out);
    return 0;
}

int run_risk(const GlobalOpts& g, const std::string& scenario, const std::string& posture_name,
             int attempts, std::uint64_t mc_runs, const std::string& at,
             const std::string& hardened_name, std::ostream& out) {
    const risk::ScenarioKind sc = risk::parse_scenario(scenario);
    const risk::PostureProfile& posture = risk::posture(sc, posture_name);
    const risk::ProbInterval chain = risk::chain_success(posture.phases);
    const risk::PercentRange range = risk::rounded_percent_range(chain);

    json doc;
    doc["kind"] = "risk-report";
    std::vector<std::uint64_t> seeds;
    if (mc_runs > 0) seeds.push_back(g.seed);
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, {}, seeds, g.partitions));
    doc["scenario"] = scenario;
    doc["posture"] = posture_name;
    doc["posture_full_name"] = posture.name;
    doc["source"] = std::string(risk::to_string(posture.source));
    doc["phases"] = {{"p1", rep::to_json(posture.phases.p1)},
                     {"p2", rep::to_json(posture.phases.p2)},
                     {"p3", rep::to_json(posture.phases.p3)}};
    doc["chain"] = {{"interval", rep::to_json(chain)}, {"rounded_range", range.str()}};
    if (chain.hi < 0.01) doc["chain"]["upper_below_1_percent"] = true;

    risk::EvalPoint point = at == "lo"   ? risk::EvalPoint::Lo
                            : at == "hi" ? risk::EvalPoint::Hi
                                         : risk::EvalPoint::Mid;
    doc["partials"] = rep::to_json(risk::phase_partials(posture.phases, point));
    doc["partials"]["at"] = at;

    json annotations = json::array();
    if (posture.name == "scar/figure-baseline") {
        annotations.push_back(
            "figure annotation 5-15% is inconsistent with the interval product " + range.str());
    }
    if (posture.name == "dawn/baseline") {
        annotations.push_back(
            "figure annotation 7-18% is inconsistent with the interval product " + range.str());
    }
    doc["annotations"] = annotations;

    if (attempts > 1) {
        const risk::ProbInterval rep_int = risk::repeated_attempts(chain, attempts);
        doc["attempts"] = {{"k", attempts},
                           {"interval", rep::to_json(rep_int)},
                           {"rounded_range", risk::rounded_percent_range(rep_int).str()},
                           {"headline_range", risk::attempts_headline_range(chain, attempts).str()}};
    }
    if (!hardened_name.empty()) {
        const risk::PostureProfile& hardened = risk::posture(sc, hardened_name);
        auto lev = risk::posture_leverage(posture.phases, hardened.phases);
        json jl;
        jl["hardened"] = hardened_name;
        jl["deltas"] = lev.deltas;
        if (lev.ratios) jl["ratios_to_smallest"] = *lev.ratios;
        doc["leverage"] = jl;
    }
    if (mc_runs > 0) {
        doc["monte_carlo"] =
            rep::to_json(risk::monte_carlo(posture.phases, mc_runs, g.seed, g.partitions));
    }

    std::ostringstream table;
    {
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%s/%s: chain [%.6f, %.6f] -> %s\n", scenario.c_str(),
                      posture_name.c_str(), chain.lo, chain.hi, range.str().c_str());
        table << buf;
        table << "sensitivity (" << at << "): " << doc["partials"]["ordering"].get<std::string>()
              << '\n';
        if (attempts > 1) {
            table << "k=" << attempts
                  << " attempts: " << doc["attempts"]["rounded_range"].get<std::string>()
                  << " (headline " << doc["attempts"]["headline_range"].get<std::string>()
                  << ")\n";
        }
        if (mc_runs > 0) {
            std::snprintf(buf, sizeof(buf), "monte carlo: %.6f +/- %.6f (n=%llu)\n",
                          doc["monte_carlo"]["estimate"].get<double>(),
                          doc["monte_carlo"]["half_width_95"].get<double>(),
                          static_cast<unsigned long long>(mc_runs));
            table << buf;
        }
    }
    emit(doc, table.str(), g, out);
    return 0;
}

int run_simulate(const GlobalOpts& g, const std::string& scenario,
                 const std::string& posture_name, std::uint64_t runs,
                 const std::string& topology_ref, const std::string& traces_path, bool trace_one,
                 std::ostream& out) {
    const risk::ScenarioKind sc = risk::parse_scenario(scenario);
    const risk::PostureProfile& posture = risk::posture(sc, posture_name);
    const scn::Scenario s = scn::load_scenario(sc);

    topo::Topology storage;
    std::vector<std::string> inputs;
    const topo::Topology& t = resolve_topology(topology_ref, storage, inputs);

    if (trace_one) {
        scn::RunTrace trace = scn::simulate_run(s, t, posture, g.seed);
        json doc = rep::to_json(trace);
        doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, inputs, {g.seed}, 1));
        doc["topology"] = t.name;
        std::ostringstream table;
        for (const auto& row : scn::timeline_table(trace)) {
            char buf[200];
            std::snprintf(buf, sizeof(buf), "%-14s %-15s %s\n", row.time.c_str(),
                          row.phase.c_str(), row.action.c_str());
            table << buf;
        }
        if (scn::timeline_table(trace).empty()) table << "(no timeline rows reached)\n";
        emit(doc, table.str(), g, out);
        return 0;
    }

    if (!traces_path.empty()) {
        std::ofstream f(traces_path, std::ios::binary);
        if (!f) throw DomainError("cannot write traces file: " + traces_path);
        for (std::uint64_t i = 0; i < runs; ++i) {
            scn::RunTrace trace =
                scn::simulate_run(s, t, posture, risk::derive_subseed(g.seed, i));
            f << rep::to_json(trace).dump() << '\n';
        }
    }

    scn::BatchSummary b = scn::simulate_batch(s, t, posture, runs, g.seed, g.partitions);
    json doc;
    doc["kind"] = "simulation-summary";
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, inputs, {g.seed}, g.partitions));
    doc["scenario"] = scenario;
    doc["posture"] = posture_name;
    doc["topology"] = t.name;
    doc["summary"] = rep::to_json(b);
    doc["technique_coverage_full"] = scn::technique_coverage(s);

    std::ostringstream table;
    {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s/%s on %s: %llu/%llu successes (rate %.4f)\n",
                      scenario.c_str(), posture_name.c_str(), t.name.c_str(),
                      static_cast<unsigned long long>(b.successes),
                      static_cast<unsigned long long>(b.runs), b.success_rate);
        table << buf;
        std::snprintf(buf, sizeof(buf), "stage failures: [%llu, %llu, %llu]\n",
                      static_cast<unsigned long long>(b.stage_failures[0]),
                      static_cast<unsigned long long>(b.stage_failures[1]),
                      static_cast<unsigned long long>(b.stage_failures[2]));
        table << buf;
    }
    emit(doc, table.str(), g, out);
    return 0;
}

std::vector<std::string> bundle_input_files(const std::string& dir) {
    static const char* names[] = {"policy.json",        "v1_handshakes.jsonl",
                                  "v2_artifacts.jsonl", "v3_latency_server.jsonl",
                                  "v3_latency_control_loop.jsonl", "v4_firmware.jsonl",
                                  "v5_timesync.jsonl",  "v6_attestations.jsonl",
                                  "v7_probes.jsonl"};
    std::vector<std::string> out;
    for (const char* n : names) {
        fs::path p = fs::path(dir) / n;
        if (fs::exists(p)) out.push_back(p.string());
    }
    return out;
}

int run_validate_bundle(const GlobalOpts& g, const std::string& dir, std::ostream& out) {
    val::TelemetryBundle bundle = val::TelemetryBundle::load(dir);
    val::ValidationReport report = val::run_all(bundle);
    json doc = rep::to_json(report);
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, bundle_input_files(dir)));
    doc["bundle"] = dir;
    emit(doc, val::report_table(report), g, out);
    return report.overall_pass ? 0 : 1;
}

int emit_single_test(const GlobalOpts& g, const char* name, const val::TestResult& t,
                     const std::vector<std::string>& inputs, std::ostream& out) {
    json doc;
    doc["kind"] = "validation-test";
    doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, inputs));
    doc["test"] = name;
    doc["result"] = rep::to_json(t);
    std::ostringstream table;
    table << name << ": " << (t.pass ? "PASS" : "FAIL") << '\n';
    for (const auto& [k, v] : t.metrics) table << "  " << k << " = " << v << '\n';
    for (const auto& v : t.violations) table << "  violation: " << v << '\n';
    for (const auto& a : t.annotations) table << "  note: " << a << '\n';
    emit(doc, table.str(), g, out);
    return t.pass ? 0 : 1;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum-era OT security toolkit: algorithm catalog, architecture model, "
                 "attack-scenario simulation, risk quantification, and control validation"};
    app.name("otquant");
    app.require_subcommand(1);

    GlobalOpts g;
    g.argv.push_back("otquant");
    for (const auto& a : args) g.argv.push_back(a);

    bool format_given = false;
    app.add_option("--output", g.output_path, "Write the report document to this path");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"json", "table", "csv"}))
        ->capture_default_str()
        ->each([&](const std::string&) { format_given = true; });
    app.add_option("--seed", g.seed, "Deterministic seed for sampled operations")
        ->capture_default_str();
    app.add_option("--partitions", g.partitions, "Partition count for batch sampling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    int exit_code = 0;

    // catalog
    auto* cat_cmd = app.add_subcommand("catalog", "Print the algorithm dataset");
    cat_cmd->fallthrough();
    auto cat_name = std::make_shared<std::string>();
    cat_cmd->add_option("--name", *cat_name, "Print one algorithm as a structured record");
    cat_cmd->callback([&, cat_name] { exit_code = run_catalog(g, *cat_name, format_given, out); });

    // topology
    auto* topo_cmd = app.add_subcommand("topology", "Validate or show topology configs");
    topo_cmd->require_subcommand(1);
    topo_cmd->fallthrough();
    auto* topo_validate = topo_cmd->add_subcommand("validate", "Validate a config document");
    topo_validate->fallthrough();
    auto topo_file = std::make_shared<std::string>();
    topo_validate->add_option("file", *topo_file, "Config document path")->required();
    topo_validate->callback([&, topo_file] { exit_code = run_topology_validate(g, *topo_file, out); });
    auto* topo_show = topo_cmd->add_subcommand("show", "Print a topology (built-in or file)");
    topo_show->fallthrough();
    auto topo_ref = std::make_shared<std::string>();
    topo_show->add_option("topology", *topo_ref, "Built-in name or config path")->required();
    topo_show->callback([&, topo_ref] { exit_code = run_topology_show(g, *topo_ref, out); });

    // risk
    auto* risk_cmd = app.add_subcommand("risk", "Interval risk chain for a posture");
    risk_cmd->fallthrough();
    auto risk_scenario = std::make_shared<std::string>();
    auto risk_posture = std::make_shared<std::string>();
    auto risk_attempts = std::make_shared<int>(1);
    auto risk_mc = std::make_shared<std::uint64_t>(0);
    auto risk_at = std::make_shared<std::string>("mid");
    auto risk_hardened = std::make_shared<std::string>();
    risk_cmd->add_option("--scenario", *risk_scenario)->required()
        ->check(CLI::IsMember({"scar", "dawn"}));
    risk_cmd->add_option("--posture", *risk_posture, "Posture short name")->required();
    risk_cmd->add_option("--attempts", *risk_attempts, "Repeated attempts k")
        ->check(CLI::PositiveNumber);
    risk_cmd->add_option("--mc", *risk_mc, "Monte Carlo run count (0 = off)");
    risk_cmd->add_option("--at", *risk_at, "Partial-derivative evaluation point")
        ->check(CLI::IsMember({"lo", "mid", "hi"}));
    risk_cmd->add_option("--hardened", *risk_hardened,
                         "Report per-phase leverage against this hardened posture");
    risk_cmd->callback([&, risk_scenario, risk_posture, risk_attempts, risk_mc, risk_at,
                        risk_hardened] {
        exit_code = run_risk(g, *risk_scenario, *risk_posture, *risk_attempts, *risk_mc,
                             *risk_at, *risk_hardened, out);
    });

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run scripted attack scenarios");
    sim_cmd->fallthrough();
    auto sim_scenario = std::make_shared<std::string>();
    auto sim_posture = std::make_shared<std::string>();
    auto sim_runs = std::make_shared<std::uint64_t>(1);
    auto sim_topology = std::make_shared<std::string>();
    auto sim_traces = std::make_shared<std::string>();
    auto sim_trace_one = std::make_shared<bool>(false);
    sim_cmd->add_option("--scenario", *sim_scenario)->required()
        ->check(CLI::IsMember({"scar", "dawn"}));
    sim_cmd->add_option("--posture", *sim_posture, "Posture short name")->required();
    sim_cmd->add_option("--runs", *sim_runs, "Number of runs");
    sim_cmd->add_option("--topology", *sim_topology, "Built-in name or config path");
    sim_cmd->add_option("--traces", *sim_traces, "Write per-run traces as JSON lines here");
    sim_cmd->add_flag("--trace-one", *sim_trace_one, "Emit a single full trace");
    sim_cmd->callback([&, sim_scenario, sim_posture, sim_runs, sim_topology, sim_traces,
                       sim_trace_one] {
        std::string topo_ref =
            sim_topology->empty() ? *sim_scenario + "-reference" : *sim_topology;
        exit_code = run_simulate(g, *sim_scenario, *sim_posture, *sim_runs, topo_ref,
                                 *sim_traces, *sim_trace_one, out);
    });

    // validate
    auto* val_cmd = app.add_subcommand("validate", "Run the V1-V7 control validation tests");
    val_cmd->fallthrough();
    auto bundle_dir = std::make_shared<std::string>();
    val_cmd->add_option("--bundle", *bundle_dir, "Telemetry bundle directory");

    auto add_input_test = [&](const char* name, const char* desc, bool with_policy,
                              auto runner) {
        auto* sub = val_cmd->add_subcommand(name, desc);
        sub->fallthrough();
        auto input = std::make_shared<std::string>();
        auto policy = std::make_shared<std::string>();
        sub->add_option("--input", *input, "JSON-lines telemetry file")->required();
        if (with_policy) {
            sub->add_option("--policy", *policy, "Handshake policy JSON")->required();
        }
        sub->callback([&, input, policy, name, runner] {
            exit_code = runner(*input, *policy, name);
        });
        return sub;
    };

    add_input_test("v1", "Handshake conformity", true,
                   [&](const std::string& input, const std::string& policy, const char* name) {
                       auto records = val::load_tls_handshakes(input);
                       auto pol = val::load_policy(policy);
                       return emit_single_test(g, name, val::v1_handshake_conformity(records, pol),
                                               {input, policy}, out);
                   });

    // v2 takes either --input (artifact stream) or direct --size/--mtu/--overhead.
    auto* v2_cmd = val_cmd->add_subcommand("v2", "MTU / fragmentation compliance");
    v2_cmd->fallthrough();
    auto v2_input = std::make_shared<std::string>();
    auto v2_size = std::make_shared<std::int64_t>(-1);
    auto v2_mtu = std::make_shared<std::int64_t>(1500);
    auto v2_overhead = std::make_shared<std::string>("auto");
    auto v2_stack = std::make_shared<std::string>("eth,ip4,tcp,tls");
    v2_cmd->add_option("--input", *v2_input, "JSON-lines artifact stream");
    v2_cmd->add_option("--size", *v2_size, "Artifact size in bytes");
    v2_cmd->add_option("--mtu", *v2_mtu, "Link MTU in bytes");
    v2_cmd->add_option("--overhead", *v2_overhead, "Overhead bytes or 'auto'");
    v2_cmd->add_option("--stack", *v2_stack, "Comma-separated stack layers for 'auto'");
    v2_cmd->callback([&, v2_input, v2_size, v2_mtu, v2_overhead, v2_stack] {
        if (!v2_input->empty()) {
            auto artifacts = val::load_artifacts(*v2_input);
            exit_code = emit_single_test(g, "V2", val::v2_artifacts(artifacts), {*v2_input}, out);
            return;
        }
        if (*v2_size < 0) throw CLI::ValidationError("v2", "--size or --input is required");
        std::int64_t overhead;
        if (*v2_overhead == "auto") {
            std::vector<std::string> layers;
            std::stringstream ss(*v2_stack);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) layers.push_back(item);
            }
            overhead = val::stack_overhead_bytes(layers);
        } else {
            overhead = std::stoll(*v2_overhead);
        }
        val::FragmentationResult r = val::v2_fragmentation(*v2_size, *v2_mtu, overhead);
        val::TestResult t;
        t.evaluated = true;
        t.pass = r.pass;
        t.metrics["n_fragments"] = static_cast<double>(r.n_fragments);
        t.metrics["overhead_bytes"] = static_cast<double>(overhead);
        t.metrics["size_bytes"] = static_cast<double>(*v2_size);
        t.metrics["mtu_bytes"] = static_cast<double>(*v2_mtu);
        if (r.degenerate) t.annotations.push_back("empty artifact: formula N=0 clamped to 1");
        if (!r.pass) {
            t.violations.push_back("N_fragments=" + std::to_string(r.n_fragments) +
                                   " exceeds single-frame requirement");
        }
        exit_code = emit_single_test(g, "V2", t, {}, out);
    });

    auto* v3_cmd = val_cmd->add_subcommand("v3", "Latency budget adherence");
    v3_cmd->fallthrough();
    auto v3_input = std::make_shared<std::string>();
    auto v3_context = std::make_shared<std::string>("server-class");
    v3_cmd->add_option("--input", *v3_input, "JSON-lines latency samples")->required();
    v3_cmd->add_option("--context", *v3_context)
        ->check(CLI::IsMember({"server-class", "control-loop"}));
    v3_cmd->callback([&, v3_input, v3_context] {
        auto samples = val::load_latency_samples(*v3_input);
        auto ctx = *v3_context == "control-loop" ? val::LatencyContext::ControlLoop
                                                 : val::LatencyContext::ServerClass;
        exit_code = emit_single_test(g, "V3", val::v3_latency(samples, ctx), {*v3_input}, out);
    });

    add_input_test("v4", "Code-signing compliance", false,
                   [&](const std::string& input, const std::string&, const char* name) {
                       auto events = val::load_firmware_events(input);
                       return emit_single_test(g, name, val::v4_code_signing(events), {input},
                                               out);
                   });
    add_input_test("v5", "Forensic hashing and time integrity", false,
                   [&](const std::string& input, const std::string&, const char* name) {
                       auto samples = val::load_time_sync(input);
                       return emit_single_test(g, name, val::v5_forensic_time(samples), {input},
                                               out);
                   });
    add_input_test("v6", "Side-channel hardening attestation", false,
                   [&](const std::string& input, const std::string&, const char* name) {
                       auto att = val::load_attestations(input);
                       return emit_single_test(g, name, val::v6_side_channel(att), {input}, out);
                   });
    add_input_test("v7", "Interoperability negative testing", true,
                   [&](const std::string& input, const std::string& policy, const char* name) {
                       auto probes = val::load_probes(input);
                       auto pol = val::load_policy(policy);
                       return emit_single_test(g, name, val::v7_negative_tests(pol, probes),
                                               {input, policy}, out);
                   });

    val_cmd->callback([&, bundle_dir] {
        if (val_cmd->get_subcommands().empty()) {
            if (bundle_dir->empty()) {
                throw CLI::ValidationError("validate", "--bundle or a per-test subcommand is required");
            }
            exit_code = run_validate_bundle(g, *bundle_dir, out);
        }
    });

    // report
    auto* report_cmd = app.add_subcommand("report", "Consolidate prior JSON outputs");
    report_cmd->fallthrough();
    auto results_dir = std::make_shared<std::string>();
    report_cmd->add_option("dir", *results_dir, "Directory of JSON outputs")->required();
    report_cmd->callback([&, results_dir] {
        json doc = rep::consolidate(*results_dir);
        std::vector<std::string> inputs;
        for (const auto& e : fs::directory_iterator(*results_dir)) {
            if (e.is_regular_file() && e.path().extension() == ".json") {
                inputs.push_back(e.path().string());
            }
        }
        std::sort(inputs.begin(), inputs.end());
        doc["manifest"] = rep::to_json(rep::make_manifest(g.argv, inputs));
        emit(doc, rep::consolidated_table(doc), g, out);
        exit_code = 0;
    });

    std::vector<const char*> argv;
    argv.push_back("otquant");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        err << app.help();
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}

}  // namespace otquant::cli
