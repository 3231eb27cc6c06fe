#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vfair/cli/commands.hpp"
#include "vfair/cli/impossibility.hpp"
#include "vfair/cli/service.hpp"

using namespace vfair;
using namespace vfair::cli;

namespace {

constexpr int kUsageError = 3;

void emit(const ojson& j, const std::string& out_path)
{
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f)
            throw ParseError("cannot write '" + out_path + "'");
        f << text;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Visibly fair priority allocation: engines, audits and the session service"};
    app.require_subcommand(1);

    std::string fixture_dir = default_fixture_dir().string();
    app.add_option("--fixtures-dir", fixture_dir, "Directory holding fixture instances");

    std::string instance_ref;
    std::string out_path;
    std::optional<std::string> mechanism;
    std::uint64_t budget = 10'000'000;
    bool timing = false;

    auto* run = app.add_subcommand("run", "Run a mechanism and audit its allocation");
    std::string audits;
    std::string provider = "truth";
    std::string rankings_file;
    run->add_option("--instance", instance_ref, "Instance file or fixture name")->required();
    run->add_option("--mechanism", mechanism, "sd|mqueue|pp|rpp|modular|dynamic-modular|table");
    run->add_option("--audit", audits, "Comma-separated: fairness,bounds,cpe,pareto,visible-efficiency,reconstruct");
    run->add_option("--provider", provider, "Rankings for dynamic-modular: truth|prompt|file")
        ->check(CLI::IsMember({"truth", "prompt", "file"}));
    run->add_option("--rankings", rankings_file, "JSON file of rankings for --provider file");
    run->add_option("--out", out_path, "Also write the report here");
    run->add_option("--budget", budget, "Node budget for domination searches");
    run->add_flag("--timing", timing, "Include elapsed time in the report");

    auto* check = app.add_subcommand("check", "Run an exhaustive oracle");
    std::string check_name;
    check->add_option("name", check_name, "sp|coherence|expressiveness|availability|weak-availability|solvency|richness|fairness-sweep")
        ->required();
    check->add_option("--instance", instance_ref, "Instance file or fixture name")->required();
    check->add_option("--mechanism", mechanism, "Mechanism under test");
    check->add_option("--out", out_path, "Also write the report here");
    check->add_option("--budget", budget, "Node budget for the solvency search");
    check->add_flag("--timing", timing, "Include elapsed time in the report");

    auto* imp = app.add_subcommand("impossibility", "Search static two-state mechanisms for unavoidable failures");
    imp->add_option("--instance", instance_ref, "Instance file or fixture name")->required();
    imp->add_option("--out", out_path, "Also write the report here");
    imp->add_option("--budget", budget, "Node budget for domination searches");
    imp->add_flag("--timing", timing, "Include elapsed time in the report");

    auto* serve = app.add_subcommand("serve", "Serve dynamic-mechanism sessions over HTTP");
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string disclosure = "aggregate";
    serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--disclosure", disclosure, "aggregate|full")->check(CLI::IsMember({"aggregate", "full"}));

    auto* fixtures = app.add_subcommand("fixtures", "List or show shipped fixtures");
    fixtures->require_subcommand(1);
    auto* list = fixtures->add_subcommand("list", "List fixture names");
    auto* show = fixtures->add_subcommand("show", "Print a fixture");
    std::string show_name;
    show->add_option("name", show_name, "Fixture name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*run) {
            Instance inst = resolve_instance(instance_ref, fixture_dir);
            RunOptions opt;
            opt.mechanism = mechanism;
            if (!audits.empty())
                opt.audits = parse_audit_list(audits);
            opt.provider = provider;
            if (!rankings_file.empty())
                opt.provider_file = rankings_file;
            opt.budget = budget;
            opt.timing = timing;
            AuditReport rep = run_command(inst, opt);
            emit(report_json(inst.problem, inst.bounds, rep), out_path);
            return exit_code(overall(rep.audits));
        }
        if (*check) {
            Instance inst = resolve_instance(instance_ref, fixture_dir);
            CheckOptions opt{check_name, mechanism, budget, timing};
            CheckResult r = check_command(inst, opt);
            emit(r.report, out_path);
            return exit_code(r.verdict);
        }
        if (*imp) {
            Instance inst = resolve_instance(instance_ref, fixture_dir);
            auto start = std::chrono::steady_clock::now();
            auto r = impossibility_search(inst.problem, inst.bounds, budget);
            ojson j{{"instance", inst.name}};
            j.update(impossibility_json(inst.problem, r));
            if (timing)
                j["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            emit(j, out_path);
            return exit_code(impossibility_verdict(r));
        }
        if (*serve) {
            SessionService svc({fixture_dir, parse_disclosure(disclosure)});
            std::cerr << "serving on http://" << host << ":" << port << "\n";
            if (!svc.serve(host, port)) {
                std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
                return kUsageError;
            }
            return 0;
        }
        if (*list) {
            emit(fixtures_list(fixture_dir), "");
            return 0;
        }
        if (*show) {
            Instance inst = resolve_instance(show_name, fixture_dir);
            emit(inst.source, "");
            return 0;
        }
    } catch (const CapExceeded& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}
