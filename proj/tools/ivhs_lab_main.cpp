#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ivhs/lab.hpp"

namespace {

int threads_from_env(int fallback) {
    const char* env = std::getenv("IVHS_THREADS");
    if (!env) return fallback;
    int v = std::atoi(env);
    return v > 0 ? v : fallback;
}

void emit(const ivhs::Json& report, const std::string& path) {
    if (path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(path);
        if (!out) throw ivhs::Error("cannot open output file " + path);
        out << report.dump(2) << "\n";
    }
}

// exit codes: 0 ok, 2 scenario error, 3 curve rejected, 4 invariant violation,
// 5 task-level failures only
int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ivhs::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ivhs::SingularCurve& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const ivhs::NotHomogeneous& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const ivhs::DegreeTooSmall& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const ivhs::CurveRejected& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const ivhs::InvariantViolation& e) {
        std::cerr << "mathematical inconsistency (always a bug): " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ivhs-lab: exact IVHS stratification laboratory on plane curves"};
    app.require_subcommand(1);

    // run
    std::string scenario_path;
    std::int64_t seed_override = -1;
    auto* run = app.add_subcommand("run", "execute a TOML scenario");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--seed", seed_override, "override the scenario seed");

    // selftest
    std::uint64_t st_prime = 101;
    std::uint64_t st_seed = 20250810;
    std::string st_output;
    auto* st = app.add_subcommand("selftest", "run the full invariant battery");
    st->add_option("--prime", st_prime, "base prime (odd, <= 32749)");
    st->add_option("--seed", st_seed, "battery seed");
    st->add_option("--output", st_output, "write the JSON report here");

    // survey
    std::string sv_field = "Fp:101", sv_curve = "x^6 + y^6 + z^6", sv_output;
    std::uint64_t sv_seed = 1;
    int sv_samples = 5;
    auto* sv = app.add_subcommand("survey", "sample strata and tabulate filtration invariants");
    sv->add_option("--field", sv_field, "field spec (Fp:<p> | QQ)");
    sv->add_option("--curve", sv_curve, "curve polynomial");
    sv->add_option("--seed", sv_seed, "seed");
    sv->add_option("--samples", sv_samples, "samples per recipe");
    sv->add_option("--output", sv_output, "write the JSON report here");

    // search
    std::string se_field = "Fp:101", se_curve = "x^6 + y^6 + z^6", se_output;
    std::uint64_t se_seed = 1;
    int se_budget = 25;
    auto* se = app.add_subcommand("search", "look for classes with long filtrations (l >= 2)");
    se->add_option("--field", se_field, "field spec (Fp:<p> | QQ)");
    se->add_option("--curve", se_curve, "curve polynomial");
    se->add_option("--seed", se_seed, "seed");
    se->add_option("--budget", se_budget, "number of classes to try");
    se->add_option("--output", se_output, "write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return guarded([&] {
            std::ifstream in(scenario_path);
            if (!in) throw ivhs::ParseError("cannot read scenario file " + scenario_path);
            std::stringstream ss;
            ss << in.rdbuf();
            ivhs::Scenario sc = ivhs::parse_scenario(ss.str());
            if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
            sc.threads = threads_from_env(sc.threads);
            auto result = ivhs::run_scenario(sc);
            emit(result.report, sc.output);
            return result.exit_code;
        });
    }
    if (st->parsed()) {
        return guarded([&] {
            auto outcome = ivhs::selftest_with_determinism(st_prime, st_seed);
            ivhs::Json rep = outcome.report;
            ivhs::Json timing = ivhs::Json::array();
            for (auto& t : outcome.timings)
                timing.push_back(ivhs::Json{{"id", t.id}, {"elapsed_ms", t.elapsed_ms}, {"within_budget", t.within_budget}});
            rep["timing"] = timing;
            emit(rep, st_output);
            // a failed criterion is a mathematical inconsistency
            return outcome.all_passed ? 0 : 4;
        });
    }
    auto run_sampling = [&](const std::string& field_spec, const std::string& curve, std::uint64_t seed,
                            const std::string& output, bool is_survey, int amount) {
        return guarded([&] {
            ivhs::Scenario sc;
            sc.field_spec = field_spec;
            sc.curve = curve;
            sc.seed = seed;
            sc.tasks = {is_survey ? "survey" : "search"};
            sc.survey_samples = amount;
            sc.search_budget = amount;
            sc.threads = threads_from_env(1);
            auto result = ivhs::run_scenario(sc);
            emit(result.report, output);
            return result.exit_code;
        });
    };
    if (sv->parsed()) return run_sampling(sv_field, sv_curve, sv_seed, sv_output, true, sv_samples);
    if (se->parsed()) return run_sampling(se_field, se_curve, se_seed, se_output, false, se_budget);
    return 2;
}
