#include "hierrank/pipeline.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "hierrank/generative_model.hpp"
#include "hierrank/mlpr.hpp"
#include "hierrank/simd/kernels.hpp"
#include "hierrank/util.hpp"

namespace hierrank {
namespace {

std::string join_path(const std::string& dir, const std::string& leaf) {
    if (dir.empty()) return leaf;
    return dir.back() == '/' ? dir + leaf : dir + "/" + leaf;
}

GenerativeModel model_for_dataset(const std::string& dataset, std::uint64_t seed) {
    if (dataset == "benchmark") return benchmark_model(seed);
    if (dataset.rfind("chain:", 0) == 0) {
        int k = 0;
        try {
            k = std::stoi(dataset.substr(6));
        } catch (...) {
            fail("dataset", "cannot parse '" + dataset + "'");
        }
        if (k < 1) fail("dataset", "chain length must be >= 1");
        return chain_model(k, seed);
    }
    fail("dataset", "unknown dataset '" + dataset + "' (benchmark or chain:K)");
}

}  // namespace

EventTable slice_table(const EventTable& t, int begin, int count) {
    if (begin < 0 || count < 0 || begin + count > t.num_objects)
        fail("table_shape", "slice outside table");
    EventTable out;
    out.num_objects = count;
    out.class_names = t.class_names;
    const auto K = static_cast<std::size_t>(t.num_classes());
    const auto b = static_cast<std::size_t>(begin) * K;
    const auto n = static_cast<std::size_t>(count) * K;
    out.scores.assign(t.scores.begin() + static_cast<std::ptrdiff_t>(b),
                      t.scores.begin() + static_cast<std::ptrdiff_t>(b + n));
    if (t.has_labels())
        out.labels.assign(t.labels.begin() + static_cast<std::ptrdiff_t>(b),
                          t.labels.begin() + static_cast<std::ptrdiff_t>(b + n));
    return out;
}

Ranking run_algorithm(const std::string& algorithm, const ScoredForest& f,
                      std::int64_t dag_budget) {
    if (algorithm == "naive") return naive_sort(f);
    if (algorithm == "hierrank") return hier_rank_tree(f);
    if (algorithm == "hierrank-fast") return hier_rank_fast(f);
    if (algorithm == "cssa") return cssa_rank(f);
    if (algorithm == "dag-and")
        return hier_rank_dag(f, DagConstraint::and_semantics, dag_budget);
    if (algorithm == "dag-or")
        return hier_rank_dag(f, DagConstraint::or_semantics, dag_budget);
    fail("algorithm", "unknown ranking algorithm '" + algorithm + "'");
}

std::vector<double> estimate_values(const std::string& variant,
                                    const io::FittedModel& model,
                                    const EventTable& scores, int threads) {
    if (variant == "raw") return scores.scores;
    if (variant == "indpt") return mlpr_indpt(model.lpr, scores, threads).values;
    if (variant == "nbh")
        return mlpr_nbh(model.lpr, model.tables, model.hierarchy, scores, threads).values;
    if (variant == "full")
        return mlpr_full(model.lpr, model.tables, model.hierarchy, scores, threads).values;
    if (variant == "gaussian")
        return mlpr_gaussian_from_model(model.lpr, model.tables, model.hierarchy,
                                        scores, threads)
            .values;
    fail("variant", "unknown estimator variant '" + variant + "'");
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    if (cfg.out.empty()) fail("out_dir", "pipeline needs an output directory");
    if (!(cfg.split_train > 0 && cfg.split_validation > 0 && cfg.split_test > 0))
        fail("splits", "split fractions must be positive");
    if (std::abs(cfg.split_train + cfg.split_validation + cfg.split_test - 1.0) > 1e-9)
        fail("splits", "split fractions must sum to 1");
    if (cfg.variant != "indpt" && cfg.variant != "nbh" && cfg.variant != "full" &&
        cfg.variant != "gaussian")
        fail("variant", "pipeline variant must be indpt, nbh, full, or gaussian");
    const CutoffObjective objective = io::objective_from(cfg.objective);
    const int threads = resolve_threads(cfg.threads);

    io::Manifest manifest;
    manifest.command = "pipeline";
    manifest.seed = cfg.seed;
    manifest.threads = threads;
    manifest.backend = simd::backend_name(simd::active_backend());
    auto param = [&](const std::string& k, const std::string& v) {
        manifest.params.emplace_back(k, v);
    };
    auto artifact = [&](const std::string& name, const std::string& leaf) {
        manifest.artifacts.emplace_back(name, leaf);
        return join_path(cfg.out, leaf);
    };

    // ---- data ----
    EventTable table;
    ClassHierarchy h;
    if (cfg.scores_path.empty()) {
        const GenerativeModel model = model_for_dataset(cfg.dataset, cfg.seed);
        table = simulate(model, cfg.samples, cfg.seed);
        h = model.hierarchy;
        io::write_scores_csv(artifact("simulated_scores", "simulate/scores.csv"), table);
        io::write_labels_csv(artifact("simulated_labels", "simulate/labels.csv"), table);
        io::write_hierarchy_csv(artifact("hierarchy", "simulate/hierarchy.csv"), h);
        io::write_generative_model(artifact("generative_model", "simulate/model.json"),
                                   model);
        param("dataset", cfg.dataset);
        param("samples", std::to_string(cfg.samples));
    } else {
        if (cfg.labels_path.empty() || cfg.hierarchy_path.empty())
            fail("pipeline_inputs", "loading data needs scores, labels, and hierarchy");
        const bool dag = cfg.algorithm.rfind("dag-", 0) == 0;
        h = load_hierarchy_file(cfg.hierarchy_path,
                                dag ? HierarchyMode::dag : HierarchyMode::tree);
        table = io::read_event_table(cfg.scores_path, cfg.labels_path);
        if (table.class_names != h.names)
            fail("csv_header", "score columns do not match the hierarchy classes");
        param("scores", cfg.scores_path);
        param("labels", cfg.labels_path);
        param("hierarchy", cfg.hierarchy_path);
    }
    if (!table.has_labels()) fail("labels_missing", "pipeline needs labeled data");

    // ---- split ----
    const int M = table.num_objects;
    const int n_train = static_cast<int>(std::llround(M * cfg.split_train));
    const int n_val = static_cast<int>(std::llround(M * cfg.split_validation));
    const int n_test = M - n_train - n_val;
    if (n_train < 1 || n_val < 1 || n_test < 1)
        fail("splits", "a split is empty at " + std::to_string(M) + " objects");
    const EventTable train = slice_table(table, 0, n_train);
    const EventTable val = slice_table(table, n_train, n_val);
    const EventTable test = slice_table(table, n_train + n_val, n_test);
    io::write_scores_csv(artifact("train_scores", "split/train_scores.csv"), train);
    io::write_labels_csv(artifact("train_labels", "split/train_labels.csv"), train);
    io::write_scores_csv(artifact("validation_scores", "split/validation_scores.csv"), val);
    io::write_labels_csv(artifact("validation_labels", "split/validation_labels.csv"), val);
    io::write_scores_csv(artifact("test_scores", "split/test_scores.csv"), test);
    io::write_labels_csv(artifact("test_labels", "split/test_labels.csv"), test);
    param("split", std::to_string(n_train) + "/" + std::to_string(n_val) + "/" +
                       std::to_string(n_test));

    // ---- fit ----
    FitOptions fit_opt;
    fit_opt.bandwidth = cfg.bandwidth;
    fit_opt.allow_degenerate = cfg.allow_degenerate;
    fit_opt.threads = threads;
    io::FittedModel fm;
    fm.hierarchy = h;
    fm.lpr = fit_lpr(train, fit_opt);
    fm.tables = fit_prob_tables(train, h);
    io::write_fitted_model(artifact("fitted_model", "fit/model.json"), fm);
    param("variant", cfg.variant);
    param("algorithm", cfg.algorithm);
    param("bandwidth", std::to_string(fm.lpr.bandwidth));

    // ---- estimate + rank ----
    auto rank_split = [&](const EventTable& part, const std::string& stage,
                          double& catch_out) {
        const std::vector<double> values =
            estimate_values(cfg.variant, fm, part, threads);
        const ScoredForest forest = make_forest(h, part.num_objects, values);
        Ranking r = run_algorithm(cfg.algorithm, forest, cfg.dag_budget);
        catch_out = catch_empirical(r, forest.values);
        io::RankSummary summary;
        summary.algorithm = cfg.algorithm;
        summary.variant = cfg.variant;
        summary.num_objects = part.num_objects;
        summary.num_classes = h.num_classes();
        summary.catch_value = catch_out;
        summary.topological = is_topological(r, h, part.num_objects);
        summary.backend = manifest.backend;
        io::write_ranking_csv(artifact(stage + "_ranking", stage + "/ranking.csv"), r,
                              h.names, values, part.scores);
        io::write_rank_summary(artifact(stage + "_summary", stage + "/summary.json"),
                               summary);
        return r;
    };
    PipelineResult res;
    res.n_train = n_train;
    res.n_validation = n_val;
    res.n_test = n_test;
    const Ranking val_r = rank_split(val, "rank_validation", res.validation_catch);
    const Ranking test_r = rank_split(test, "rank_test", res.test_catch);

    // ---- evaluate ----
    const std::vector<std::uint8_t>& val_y = val.labels;
    const std::vector<std::uint8_t>& test_y = test.labels;
    io::EvalReport rep;
    rep.decision = select_cutoff(val_r, val_y, objective, cfg.alpha);
    rep.validation = fdp_f1_at(val_r, val_y, rep.decision.cutoff_rank);
    rep.scaled_rank = scaled_cutoff(rep.decision, test_r.size());
    rep.test = fdp_f1_at(test_r, test_y, rep.scaled_rank);
    rep.validation_auc = hit_curve(val_r, val_y).auc;
    const HitCurve test_hc = hit_curve(test_r, test_y);
    rep.test_auc = test_hc.auc;
    for (double k : cfg.kappas)
        rep.kappa_table.push_back(precision_recall_at(test_r, test_y, k));
    io::write_eval_report(artifact("metrics", "evaluate/metrics.json"), rep);
    io::write_pr_curve_csv(artifact("test_pr_curve", "evaluate/pr_curve_test.csv"),
                           pr_curve(test_r, test_y));
    io::write_hit_curve_csv(artifact("test_hit_curve", "evaluate/hit_curve_test.csv"),
                            test_hc);
    param("objective", cfg.objective);
    if (objective == CutoffObjective::target_fdr)
        param("alpha", std::to_string(cfg.alpha));

    io::write_manifest(join_path(cfg.out, "manifest.json"), manifest);
    res.report = std::move(rep);
    return res;
}

}  // namespace hierrank
