#include "hierrank/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "hierrank/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace hierrank::io {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file_open", "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

double parse_double(const std::string& s, const std::string& where) {
    double v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        fail("csv_parse", "bad number '" + s + "' in " + where);
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& where) {
    std::int64_t v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        fail("csv_parse", "bad integer '" + s + "' in " + where);
    return v;
}

// header + M rows of K doubles
std::pair<std::vector<std::string>, std::vector<double>> read_matrix(
    const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) fail("csv_header", "empty csv " + path);
    auto names = split_csv(lines[0]);
    std::vector<double> data;
    data.reserve((lines.size() - 1) * names.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        if (cells.size() != names.size())
            fail("csv_shape", path + ": row " + std::to_string(i) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(names.size()));
        for (const auto& c : cells) data.push_back(parse_double(c, path));
    }
    return {std::move(names), std::move(data)};
}

void write_matrix(const std::string& path, const EventTable& t, bool labels) {
    std::ostringstream os;
    for (int k = 0; k < t.num_classes(); ++k)
        os << (k ? "," : "") << t.class_names[static_cast<std::size_t>(k)];
    os << '\n';
    for (int m = 0; m < t.num_objects; ++m) {
        for (int k = 0; k < t.num_classes(); ++k) {
            if (k) os << ',';
            if (labels)
                os << t.label(m, k);
            else
                os << fmt(t.score(m, k));
        }
        os << '\n';
    }
    write_text_atomic(path, os.str());
}

ClassHierarchy hierarchy_from_parts(const std::vector<std::string>& names,
                                    const std::vector<std::vector<int>>& parents,
                                    HierarchyMode mode) {
    std::vector<EdgeRow> rows;
    rows.reserve(names.size() * 2);
    for (const auto& n : names) rows.emplace_back("", n);
    for (std::size_t k = 0; k < names.size(); ++k)
        for (int p : parents[k])
            rows.emplace_back(names[static_cast<std::size_t>(p)], names[k]);
    return load_hierarchy(rows, mode);
}

json hierarchy_to_json(const ClassHierarchy& h) {
    return json{{"mode", h.mode == HierarchyMode::tree ? "tree" : "dag"},
                {"classes", h.names},
                {"parents", h.parents}};
}

ClassHierarchy hierarchy_from_json(const json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "tree" && mode != "dag") fail("json_parse", "unknown hierarchy mode " + mode);
    return hierarchy_from_parts(j.at("classes").get<std::vector<std::string>>(),
                                j.at("parents").get<std::vector<std::vector<int>>>(),
                                mode == "tree" ? HierarchyMode::tree : HierarchyMode::dag);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("file_open", "cannot open " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail("json_parse", "invalid json in " + path);
    return j;
}

void expect_type(const json& j, const std::string& want, const std::string& path) {
    const std::string got = j.value("type", "");
    if (got != want)
        fail("model_type", path + ": expected type '" + want + "', found '" + got + "'");
}

json dist_to_json(const ScoreDist& d) {
    return json{{"family", d.family}, {"a", d.a}, {"b", d.b}};
}

ScoreDist dist_from_json(const json& j) {
    ScoreDist d;
    d.family = j.at("family").get<std::string>();
    d.a = j.at("a").get<double>();
    d.b = j.at("b").get<double>();
    d.validate();
    return d;
}

}  // namespace

void ensure_dir(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) fail("file_open", "cannot create directory " + path + ": " + ec.message());
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) ensure_dir(target.parent_path().string());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("file_open", "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail("file_open", "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) fail("file_open", "cannot move " + tmp.string() + " into place: " + ec.message());
}

void write_scores_csv(const std::string& path, const EventTable& t) {
    write_matrix(path, t, false);
}

void write_labels_csv(const std::string& path, const EventTable& t) {
    if (!t.has_labels()) fail("labels_missing", "table has no labels to write");
    write_matrix(path, t, true);
}

EventTable read_event_table(const std::string& scores_path,
                            const std::string& labels_path) {
    EventTable t;
    auto [names, scores] = read_matrix(scores_path);
    if (names.empty() || (names.size() == 1 && names[0].empty()))
        fail("csv_header", "no class columns in " + scores_path);
    t.class_names = std::move(names);
    if (scores.size() % t.class_names.size() != 0)
        fail("csv_shape", "ragged score matrix in " + scores_path);
    t.num_objects = static_cast<int>(scores.size() / t.class_names.size());
    t.scores = std::move(scores);
    if (!labels_path.empty()) {
        auto [lnames, lvalues] = read_matrix(labels_path);
        if (lnames != t.class_names)
            fail("csv_header", "label header does not match score header");
        if (lvalues.size() != t.scores.size())
            fail("csv_shape", "label and score row counts differ");
        t.labels.reserve(lvalues.size());
        for (double v : lvalues) {
            if (v != 0.0 && v != 1.0) fail("label_value", "labels must be 0/1");
            t.labels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    return t;
}

void write_hierarchy_csv(const std::string& path, const ClassHierarchy& h) {
    std::ostringstream os;
    os << "parent,child\n";
    for (int k = 0; k < h.num_classes(); ++k) {
        const auto& pa = h.parents[static_cast<std::size_t>(k)];
        if (pa.empty()) {
            os << ',' << h.names[static_cast<std::size_t>(k)] << '\n';
        } else {
            for (int p : pa)
                os << h.names[static_cast<std::size_t>(p)] << ','
                   << h.names[static_cast<std::size_t>(k)] << '\n';
        }
    }
    write_text_atomic(path, os.str());
}

void write_ranking_csv(const std::string& path, const Ranking& r,
                       const std::vector<std::string>& class_names,
                       std::span<const double> values,
                       std::span<const double> scores) {
    const int K = static_cast<int>(class_names.size());
    std::ostringstream os;
    os << "rank,object,class,score,value\n";
    for (std::int64_t i = 0; i < r.size(); ++i) {
        const std::int64_t e = r.order[static_cast<std::size_t>(i)];
        const auto idx = EventIndex::from_flat(e, K);
        const double v = values[static_cast<std::size_t>(e)];
        const double s = scores.empty() ? v : scores[static_cast<std::size_t>(e)];
        os << (i + 1) << ',' << idx.object << ','
           << class_names[static_cast<std::size_t>(idx.cls)] << ',' << fmt(s) << ','
           << fmt(v) << '\n';
    }
    write_text_atomic(path, os.str());
}

Ranking read_ranking_csv(const std::string& path,
                         const std::vector<std::string>& class_names) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_csv(lines[0]).size() != 5)
        fail("csv_header", "expected rank,object,class,score,value header in " + path);
    std::unordered_map<std::string, int> id;
    for (std::size_t k = 0; k < class_names.size(); ++k)
        id[class_names[k]] = static_cast<int>(k);
    const int K = static_cast<int>(class_names.size());
    Ranking r;
    r.num_classes = K;
    r.order.reserve(lines.size() - 1);
    int max_object = -1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        if (cells.size() != 5)
            fail("csv_shape", path + ": row " + std::to_string(i) + " has " +
                                  std::to_string(cells.size()) + " cells");
        if (parse_int(cells[0], path) != static_cast<std::int64_t>(i))
            fail("ranking_csv", path + ": rank column is not 1..n in order");
        const auto m = parse_int(cells[1], path);
        const auto it = id.find(cells[2]);
        if (m < 0 || it == id.end())
            fail("ranking_csv", path + ": bad object/class at row " + std::to_string(i));
        max_object = std::max(max_object, static_cast<int>(m));
        r.order.push_back(m * K + it->second);
    }
    r.num_objects = max_object + 1;
    if (r.size() != static_cast<std::int64_t>(r.num_objects) * K)
        fail("ranking_csv", path + ": rows do not cover objects x classes");
    return r;
}

void write_pr_curve_csv(const std::string& path,
                        const std::vector<PrecisionRecall>& points) {
    std::ostringstream os;
    os << "depth,precision,recall\n";
    for (const auto& p : points)
        os << p.depth << ',' << fmt(p.precision) << ',' << fmt(p.recall) << '\n';
    write_text_atomic(path, os.str());
}

void write_hit_curve_csv(const std::string& path, const HitCurve& hc) {
    std::ostringstream os;
    os << "depth,hits\n";
    for (std::size_t i = 0; i < hc.hits.size(); ++i)
        os << (i + 1) << ',' << hc.hits[i] << '\n';
    write_text_atomic(path, os.str());
}

void write_fitted_model(const std::string& path, const FittedModel& m) {
    json classes = json::array();
    for (const auto& c : m.lpr.classes)
        classes.push_back(json{{"tau", c.tau},
                               {"degenerate", c.degenerate},
                               {"positives", c.positives},
                               {"negatives", c.negatives}});
    json gauss = json::array();
    for (const auto& g : m.lpr.gauss)
        gauss.push_back(json{{"mu0", g.mu0},
                             {"var0", g.var0},
                             {"mu1", g.mu1},
                             {"var1", g.var1},
                             {"n0", g.n0},
                             {"n1", g.n1}});
    json cond = json::array();
    for (std::size_t k = 0; k < m.tables.cond.size(); ++k) {
        if (m.hierarchy.is_root(static_cast<int>(k)))
            cond.push_back(nullptr);
        else
            cond.push_back(m.tables.cond[k]);
    }
    const json j{
        {"type", "fitted_model"},
        {"hierarchy", hierarchy_to_json(m.hierarchy)},
        {"lpr",
         {{"kernel", m.lpr.kernel},
          {"bandwidth", m.lpr.bandwidth},
          {"clip_floor", m.lpr.clip_floor},
          {"density_floor", m.lpr.density_floor},
          {"train_rows", m.lpr.train_rows},
          {"class_names", m.lpr.class_names},
          {"classes", classes},
          {"gauss", gauss}}},
        {"tables",
         {{"clip_floor", m.tables.clip_floor},
          {"prior", m.tables.prior},
          {"cond", cond},
          {"cond_fallback", m.tables.cond_fallback},
          {"warnings", m.tables.warnings}}}};
    write_text_atomic(path, j.dump(2) + "\n");
}

FittedModel read_fitted_model(const std::string& path) {
    const json j = load_json(path);
    expect_type(j, "fitted_model", path);
    FittedModel m;
    m.hierarchy = hierarchy_from_json(j.at("hierarchy"));
    const json& l = j.at("lpr");
    m.lpr.kernel = l.at("kernel").get<std::string>();
    m.lpr.bandwidth = l.at("bandwidth").get<double>();
    m.lpr.clip_floor = l.at("clip_floor").get<double>();
    m.lpr.density_floor = l.at("density_floor").get<double>();
    m.lpr.train_rows = l.at("train_rows").get<int>();
    m.lpr.class_names = l.at("class_names").get<std::vector<std::string>>();
    for (const json& c : l.at("classes")) {
        LprModel::ClassKde kde;
        kde.tau = c.at("tau").get<double>();
        kde.degenerate = c.at("degenerate").get<bool>();
        kde.positives = c.at("positives").get<std::vector<double>>();
        kde.negatives = c.at("negatives").get<std::vector<double>>();
        m.lpr.classes.push_back(std::move(kde));
    }
    for (const json& g : l.at("gauss")) {
        LprModel::Moments mm;
        mm.mu0 = g.at("mu0").get<double>();
        mm.var0 = g.at("var0").get<double>();
        mm.mu1 = g.at("mu1").get<double>();
        mm.var1 = g.at("var1").get<double>();
        mm.n0 = g.at("n0").get<std::int64_t>();
        mm.n1 = g.at("n1").get<std::int64_t>();
        m.lpr.gauss.push_back(mm);
    }
    const json& t = j.at("tables");
    m.tables.clip_floor = t.at("clip_floor").get<double>();
    m.tables.prior = t.at("prior").get<std::vector<double>>();
    for (const json& c : t.at("cond"))
        m.tables.cond.push_back(c.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                            : c.get<double>());
    m.tables.cond_fallback = t.at("cond_fallback").get<std::vector<std::uint8_t>>();
    m.tables.warnings = t.at("warnings").get<std::vector<std::string>>();
    if (m.lpr.class_names != m.hierarchy.names)
        fail("model_type", path + ": estimator classes do not match hierarchy");
    return m;
}

void write_generative_model(const std::string& path, const GenerativeModel& m) {
    json pos = json::array(), neg = json::array();
    for (const auto& d : m.pos) pos.push_back(dist_to_json(d));
    for (const auto& d : m.neg) neg.push_back(dist_to_json(d));
    const json j{{"type", "generative_model"},
                 {"hierarchy", hierarchy_to_json(m.hierarchy)},
                 {"prob", m.prob},
                 {"pos", pos},
                 {"neg", neg},
                 {"quality", m.quality}};
    write_text_atomic(path, j.dump(2) + "\n");
}

GenerativeModel read_generative_model(const std::string& path) {
    const json j = load_json(path);
    expect_type(j, "generative_model", path);
    GenerativeModel m;
    m.hierarchy = hierarchy_from_json(j.at("hierarchy"));
    m.prob = j.at("prob").get<std::vector<double>>();
    for (const json& d : j.at("pos")) m.pos.push_back(dist_from_json(d));
    for (const json& d : j.at("neg")) m.neg.push_back(dist_from_json(d));
    m.quality = j.at("quality").get<std::vector<std::string>>();
    m.validate();
    return m;
}

void write_rank_summary(const std::string& path, const RankSummary& s) {
    const json j{{"algorithm", s.algorithm},   {"variant", s.variant},
                 {"num_objects", s.num_objects}, {"num_classes", s.num_classes},
                 {"catch", s.catch_value},     {"topological", s.topological},
                 {"backend", s.backend}};
    write_text_atomic(path, j.dump(2) + "\n");
}

void write_eval_report(const std::string& path, const EvalReport& r) {
    auto fdp_json = [](const FdpF1& f) {
        return json{{"cutoff", f.cutoff},       {"fdp", f.fdp}, {"precision", f.precision},
                    {"recall", f.recall},       {"f1", f.f1}};
    };
    json kappa = json::array();
    for (const auto& p : r.kappa_table)
        kappa.push_back(json{
            {"depth", p.depth}, {"precision", p.precision}, {"recall", p.recall}});
    json decision{{"objective", objective_name(r.decision.objective)},
                  {"cutoff_rank", r.decision.cutoff_rank},
                  {"achieved", r.decision.achieved},
                  {"n_validation", r.decision.n_validation},
                  {"warning", r.decision.warning}};
    if (r.decision.objective == CutoffObjective::target_fdr)
        decision["alpha"] = r.decision.alpha;
    if (r.decision.warning) decision["warning_message"] = r.decision.warning_message;
    const json j{{"type", "evaluation"},
                 {"decision", decision},
                 {"validation", fdp_json(r.validation)},
                 {"test", fdp_json(r.test)},
                 {"scaled_rank", r.scaled_rank},
                 {"validation_auc", r.validation_auc},
                 {"test_auc", r.test_auc},
                 {"kappa_table", kappa}};
    write_text_atomic(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& path, const Manifest& m) {
    json params = json::object(), artifacts = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    for (const auto& [k, v] : m.artifacts) artifacts[k] = v;
    const json j{{"type", "manifest"},   {"command", m.command},
                 {"seed", m.seed},       {"threads", m.threads},
                 {"backend", m.backend}, {"params", params},
                 {"artifacts", artifacts}};
    write_text_atomic(path, j.dump(2) + "\n");
}

std::string error_json(const std::string& code, const std::string& message) {
    const json j{{"error", {{"code", code}, {"message", message}}}};
    return j.dump() + "\n";
}

const char* objective_name(CutoffObjective o) {
    return o == CutoffObjective::target_fdr ? "target_fdr" : "max_f1";
}

CutoffObjective objective_from(const std::string& name) {
    if (name == "target_fdr") return CutoffObjective::target_fdr;
    if (name == "max_f1") return CutoffObjective::max_f1;
    fail("objective", "unknown cutoff objective '" + name + "'");
}

}  // namespace hierrank::io
