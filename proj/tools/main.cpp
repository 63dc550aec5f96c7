// hierrank CLI: simulate | fit | rank | evaluate | pipeline. Every command is
// deterministic given (inputs, seed), writes its artifacts plus a manifest
// into --out, and reports failures as one-line JSON on stderr.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hierrank/generative_model.hpp"
#include "hierrank/io.hpp"
#include "hierrank/mlpr.hpp"
#include "hierrank/pipeline.hpp"
#include "hierrank/simd/kernels.hpp"
#include "hierrank/util.hpp"

namespace {

using namespace hierrank;

constexpr const char* kVersion = "hierrank 1.0.0";

std::string join_path(const std::string& dir, const std::string& leaf) {
    if (dir.empty()) return leaf;
    return dir.back() == '/' ? dir + leaf : dir + "/" + leaf;
}

std::string normalized(std::string s) {
    for (char& c : s)
        if (c == '-') c = '_';
    return s;
}

std::vector<double> parse_kappas(const std::string& spec) {
    std::vector<double> out;
    if (spec.empty() || spec == "none") return out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t pos = spec.find(',', start);
        const std::string tok =
            spec.substr(start, pos == std::string::npos ? pos : pos - start);
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            fail("kappa_range", "cannot parse kappa '" + tok + "'");
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// "5/6" or "0.25"
double parse_fraction(const std::string& tok) {
    try {
        const std::size_t slash = tok.find('/');
        if (slash == std::string::npos) return std::stod(tok);
        return std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
    } catch (...) {
        fail("splits", "cannot parse split fraction '" + tok + "'");
    }
}

void parse_splits(const std::string& spec, PipelineConfig& cfg) {
    std::vector<std::string> toks;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = spec.find(',', start);
        toks.push_back(spec.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (toks.size() != 3) fail("splits", "--splits wants train,validation,test");
    cfg.split_train = parse_fraction(toks[0]);
    cfg.split_validation = parse_fraction(toks[1]);
    cfg.split_test = parse_fraction(toks[2]);
}

// "target-fdr:0.05" | "max-f1"
void parse_cutoff_spec(const std::string& spec, CutoffObjective& objective,
                       double& alpha) {
    const std::size_t colon = spec.find(':');
    const std::string name = normalized(spec.substr(0, colon));
    objective = io::objective_from(name);
    if (colon != std::string::npos) {
        if (objective != CutoffObjective::target_fdr)
            fail("objective", "only target-fdr takes a parameter");
        try {
            alpha = std::stod(spec.substr(colon + 1));
        } catch (...) {
            fail("alpha_range", "cannot parse alpha in '" + spec + "'");
        }
    }
}

struct SimulateArgs {
    std::string out, dataset = "benchmark";
    int samples = 60000;
    std::uint64_t seed = 1;
};

int cmd_simulate(const SimulateArgs& a) {
    GenerativeModel model;
    if (a.dataset == "benchmark") {
        model = benchmark_model(a.seed);
    } else if (a.dataset.rfind("chain:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(a.dataset.substr(6));
        } catch (...) {
            fail("dataset", "cannot parse '" + a.dataset + "'");
        }
        model = chain_model(k, a.seed);
    } else {
        fail("dataset", "unknown dataset '" + a.dataset + "'");
    }
    const EventTable table = simulate(model, a.samples, a.seed);
    io::write_scores_csv(join_path(a.out, "scores.csv"), table);
    io::write_labels_csv(join_path(a.out, "labels.csv"), table);
    io::write_hierarchy_csv(join_path(a.out, "hierarchy.csv"), model.hierarchy);
    io::write_generative_model(join_path(a.out, "model.json"), model);

    io::Manifest m;
    m.command = "simulate";
    m.seed = a.seed;
    m.backend = simd::backend_name(simd::active_backend());
    m.params = {{"dataset", a.dataset}, {"samples", std::to_string(a.samples)}};
    m.artifacts = {{"scores", "scores.csv"},
                   {"labels", "labels.csv"},
                   {"hierarchy", "hierarchy.csv"},
                   {"generative_model", "model.json"}};
    io::write_manifest(join_path(a.out, "manifest.json"), m);
    std::cout << "wrote " << table.num_objects << " objects x " << table.num_classes()
              << " classes to " << a.out << "\n";
    return 0;
}

struct FitArgs {
    std::string scores, labels, hierarchy, out, kernel = "gaussian";
    double bandwidth = 0;
    bool allow_degenerate = false;
    int threads = 1;
};

int cmd_fit(const FitArgs& a) {
    const ClassHierarchy h = load_hierarchy_file(a.hierarchy, HierarchyMode::tree);
    const EventTable train = io::read_event_table(a.scores, a.labels);
    if (train.class_names != h.names)
        fail("csv_header", "score columns do not match the hierarchy classes");
    if (!train.has_labels()) fail("labels_missing", "fit needs labels");
    FitOptions opt;
    opt.bandwidth = a.bandwidth;
    opt.kernel = a.kernel;
    opt.allow_degenerate = a.allow_degenerate;
    opt.threads = resolve_threads(a.threads);
    io::FittedModel fm;
    fm.hierarchy = h;
    fm.lpr = fit_lpr(train, opt);
    fm.tables = fit_prob_tables(train, h);
    io::write_fitted_model(join_path(a.out, "model.json"), fm);

    io::Manifest m;
    m.command = "fit";
    m.threads = opt.threads;
    m.backend = simd::backend_name(simd::active_backend());
    m.params = {{"scores", a.scores},
                {"labels", a.labels},
                {"hierarchy", a.hierarchy},
                {"kernel", a.kernel},
                {"bandwidth", std::to_string(fm.lpr.bandwidth)}};
    m.artifacts = {{"fitted_model", "model.json"}};
    io::write_manifest(join_path(a.out, "manifest.json"), m);
    std::cout << "fitted " << h.num_classes() << " classes on " << train.num_objects
              << " objects\n";
    return 0;
}

struct RankArgs {
    std::string scores, model, hierarchy, out;
    std::string variant = "full", algo = "hierrank-fast";
    std::int64_t dag_budget = std::int64_t(1) << 20;
    int threads = 1;
};

int cmd_rank(const RankArgs& a) {
    const int threads = resolve_threads(a.threads);
    const bool dag = a.algo.rfind("dag-", 0) == 0;

    io::FittedModel fm;
    bool have_model = !a.model.empty();
    if (have_model) fm = io::read_fitted_model(a.model);
    if (a.variant != "raw" && !have_model)
        fail("pipeline_inputs", "variant '" + a.variant + "' needs --model");

    ClassHierarchy rank_h;
    if (!a.hierarchy.empty())
        rank_h = load_hierarchy_file(a.hierarchy,
                                     dag ? HierarchyMode::dag : HierarchyMode::tree);
    else if (have_model)
        rank_h = fm.hierarchy;
    else
        fail("pipeline_inputs", "rank needs --model or --hierarchy");

    const EventTable scores = io::read_event_table(a.scores, "");
    if (scores.class_names != rank_h.names)
        fail("csv_header", "score columns do not match the hierarchy classes");
    if (have_model && fm.lpr.class_names != scores.class_names)
        fail("csv_header", "score columns do not match the fitted model");

    const std::vector<double> values = estimate_values(a.variant, fm, scores, threads);
    const ScoredForest forest = make_forest(rank_h, scores.num_objects, values);
    const Ranking r = run_algorithm(a.algo, forest, a.dag_budget);

    io::RankSummary summary;
    summary.algorithm = a.algo;
    summary.variant = a.variant;
    summary.num_objects = scores.num_objects;
    summary.num_classes = rank_h.num_classes();
    summary.catch_value = catch_empirical(r, values);
    summary.topological = is_topological(r, rank_h, scores.num_objects);
    summary.backend = simd::backend_name(simd::active_backend());
    io::write_ranking_csv(join_path(a.out, "ranking.csv"), r, rank_h.names, values,
                          scores.scores);
    io::write_rank_summary(join_path(a.out, "summary.json"), summary);

    io::Manifest m;
    m.command = "rank";
    m.threads = threads;
    m.backend = summary.backend;
    m.params = {{"scores", a.scores},   {"model", a.model},
                {"hierarchy", a.hierarchy}, {"variant", a.variant},
                {"algo", a.algo}};
    m.artifacts = {{"ranking", "ranking.csv"}, {"summary", "summary.json"}};
    io::write_manifest(join_path(a.out, "manifest.json"), m);
    std::cout << "ranked " << r.size() << " events, CATCH " << summary.catch_value
              << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string ranking, labels, out;
    std::string kappas = "0.05,0.1,0.2,0.3,0.5";
    std::string cutoff;  // empty -> no cutoff selection
};

int cmd_evaluate(const EvaluateArgs& a) {
    const EventTable labeled = io::read_event_table(a.labels, a.labels);
    const Ranking r = io::read_ranking_csv(a.ranking, labeled.class_names);
    if (r.num_objects != labeled.num_objects)
        fail("ranking_csv", "ranking and label object counts differ");
    const std::vector<std::uint8_t>& y = labeled.labels;

    io::EvalReport rep;
    const HitCurve hc = hit_curve(r, y);
    rep.test_auc = hc.auc;
    rep.validation_auc = hc.auc;
    for (double k : parse_kappas(a.kappas))
        rep.kappa_table.push_back(precision_recall_at(r, y, k));
    if (!a.cutoff.empty()) {
        CutoffObjective objective = CutoffObjective::target_fdr;
        double alpha = 0.1;
        parse_cutoff_spec(a.cutoff, objective, alpha);
        rep.decision = select_cutoff(r, y, objective, alpha);
        rep.validation = fdp_f1_at(r, y, rep.decision.cutoff_rank);
        rep.scaled_rank = rep.decision.cutoff_rank;
        rep.test = rep.validation;  // self-evaluation: same ranking
    } else {
        rep.decision.n_validation = r.size();
    }
    io::write_eval_report(join_path(a.out, "metrics.json"), rep);
    io::write_pr_curve_csv(join_path(a.out, "pr_curve.csv"), pr_curve(r, y));
    io::write_hit_curve_csv(join_path(a.out, "hit_curve.csv"), hc);

    io::Manifest m;
    m.command = "evaluate";
    m.backend = simd::backend_name(simd::active_backend());
    m.params = {{"ranking", a.ranking},
                {"labels", a.labels},
                {"kappas", a.kappas},
                {"cutoff", a.cutoff}};
    m.artifacts = {{"metrics", "metrics.json"},
                   {"pr_curve", "pr_curve.csv"},
                   {"hit_curve", "hit_curve.csv"}};
    io::write_manifest(join_path(a.out, "manifest.json"), m);
    std::cout << "evaluated " << r.size() << " events, hit-curve AUC " << hc.auc
              << "\n";
    return 0;
}

struct PipelineArgs {
    PipelineConfig cfg;
    std::string splits, objective_spec = "target-fdr:0.1", kappas;
};

int cmd_pipeline(PipelineArgs& a) {
    if (!a.splits.empty()) parse_splits(a.splits, a.cfg);
    CutoffObjective objective = CutoffObjective::target_fdr;
    double alpha = a.cfg.alpha;
    parse_cutoff_spec(a.objective_spec, objective, alpha);
    a.cfg.objective = io::objective_name(objective);
    a.cfg.alpha = alpha;
    if (!a.kappas.empty()) a.cfg.kappas = parse_kappas(a.kappas);
    const PipelineResult res = run_pipeline(a.cfg);
    std::cout << "pipeline done: validation CATCH " << res.validation_catch
              << ", test CATCH " << res.test_catch << ", cutoff "
              << res.report.decision.cutoff_rank << " -> test FDP "
              << res.report.test.fdp << ", F1 " << res.report.test.f1 << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical multi-label decision making: mLPR estimation, "
                 "topologically constrained ranking, cutoff selection"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Draw a labeled synthetic data set");
    s->add_option("--out", sim.out, "Output directory")->required();
    s->add_option("--seed", sim.seed, "Root RNG seed");
    s->add_option("--samples", sim.samples, "Number of objects")
        ->check(CLI::PositiveNumber);
    s->add_option("--classes", sim.dataset, "benchmark | chain:K");

    FitArgs fit;
    auto* f = app.add_subcommand("fit", "Fit the LPR estimator and label tables");
    f->add_option("--scores", fit.scores, "Training scores CSV")->required();
    f->add_option("--labels", fit.labels, "Training labels CSV")->required();
    f->add_option("--hierarchy", fit.hierarchy, "Hierarchy CSV")->required();
    f->add_option("--out", fit.out, "Output directory")->required();
    f->add_option("--bandwidth", fit.bandwidth, "KDE bandwidth (0 = default)");
    f->add_option("--kernel", fit.kernel, "KDE kernel");
    f->add_flag("--allow-degenerate", fit.allow_degenerate,
                "Accept classes with no positive training labels");
    f->add_option("--threads", fit.threads, "Worker threads (0 = hardware)");

    RankArgs rank;
    auto* r = app.add_subcommand("rank", "Estimate mLPR and rank all events");
    r->add_option("--scores", rank.scores, "Scores CSV")->required();
    r->add_option("--model", rank.model, "Fitted model JSON");
    r->add_option("--hierarchy", rank.hierarchy,
                  "Hierarchy CSV (defaults to the model's)");
    r->add_option("--out", rank.out, "Output directory")->required();
    r->add_option("--variant", rank.variant, "raw | indpt | nbh | full | gaussian");
    r->add_option("--algo", rank.algo,
                  "naive | hierrank | hierrank-fast | cssa | dag-and | dag-or");
    r->add_option("--dag-budget", rank.dag_budget, "Max single-parent reductions");
    r->add_option("--threads", rank.threads, "Worker threads (0 = hardware)");

    EvaluateArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score a ranking against labels");
    e->add_option("--ranking", ev.ranking, "ranking.csv from rank")->required();
    e->add_option("--labels", ev.labels, "Labels CSV")->required();
    e->add_option("--out", ev.out, "Output directory")->required();
    e->add_option("--kappas", ev.kappas, "Comma list of top-fraction depths");
    e->add_option("--cutoff", ev.cutoff, "target-fdr:ALPHA | max-f1");

    PipelineArgs pl;
    auto* p = app.add_subcommand("pipeline",
                                 "simulate/load -> split -> fit -> rank -> evaluate");
    p->add_option("--out", pl.cfg.out, "Artifact directory")->required();
    p->add_option("--seed", pl.cfg.seed, "Root RNG seed");
    p->add_option("--samples", pl.cfg.samples, "Objects to simulate")
        ->check(CLI::PositiveNumber);
    p->add_option("--classes", pl.cfg.dataset, "benchmark | chain:K");
    p->add_option("--scores", pl.cfg.scores_path, "Scores CSV (skips simulation)");
    p->add_option("--labels", pl.cfg.labels_path, "Labels CSV");
    p->add_option("--hierarchy", pl.cfg.hierarchy_path, "Hierarchy CSV");
    p->add_option("--splits", pl.splits, "train,validation,test fractions (a/b ok)");
    p->add_option("--variant", pl.cfg.variant, "indpt | nbh | full | gaussian");
    p->add_option("--algo", pl.cfg.algorithm,
                  "naive | hierrank | hierrank-fast | cssa | dag-and | dag-or");
    p->add_option("--cutoff", pl.objective_spec, "target-fdr:ALPHA | max-f1");
    p->add_option("--kappas", pl.kappas, "Comma list of top-fraction depths");
    p->add_option("--bandwidth", pl.cfg.bandwidth, "KDE bandwidth (0 = default)");
    p->add_flag("--allow-degenerate", pl.cfg.allow_degenerate,
                "Accept classes with no positive training labels");
    p->add_option("--dag-budget", pl.cfg.dag_budget, "Max single-parent reductions");
    p->add_option("--threads", pl.cfg.threads, "Worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        std::cerr << hierrank::io::error_json("cli", err.what());
        return err.get_exit_code();
    }

    try {
        if (*s) return cmd_simulate(sim);
        if (*f) return cmd_fit(fit);
        if (*r) return cmd_rank(rank);
        if (*e) return cmd_evaluate(ev);
        if (*p) return cmd_pipeline(pl);
    } catch (const hierrank::Error& err) {
        std::cerr << hierrank::io::error_json(err.code(), err.what());
        return 1;
    } catch (const std::exception& err) {
        std::cerr << hierrank::io::error_json("internal", err.what());
        return 2;
    }
    return 0;
}
