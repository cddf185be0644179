#include "fcesched/io.hpp"

#include "fcesched/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

namespace fcesched {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (v == 0.0) {
        return "0"; // also folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text_file(const std::filesystem::path &path, const std::string &contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + path.string() + "' for writing");
        }
        out << contents;
        out.flush();
        if (!out) {
            throw IoError("write to '" + path.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into '" + path.string() + "'");
    }
}

std::string config_comment(const Json &config) {
    if (config.is_null() || config.empty()) {
        return {};
    }
    return "# config: " + config.dump() + "\n";
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, std::size_t line, const char *name) {
    field = trim(field);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || field.empty()) {
        throw ParseError(line, std::string("field '") + name + "' is not a number: '" +
                                   std::string(field) + "'");
    }
    return v;
}

// Iterates non-comment, non-blank lines with their 1-based numbers.
template <typename Fn> void for_each_line(const std::string &text, Fn &&fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        ++line_no;
        const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        fn(line, line_no);
    }
}

} // namespace

std::string trace_to_csv(const ConductanceTrace &trace, const Json &config) {
    std::string out = config_comment(config);
    out += "t,v,g,fb_flag,vfb_label\n";
    std::size_t next_event = 0;
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const TraceSample &s = trace.samples[i];
        const bool fb = next_event < trace.fb_events.size() && trace.fb_events[next_event] == i;
        out += format_double(s.t);
        out += ',';
        out += format_double(s.v);
        out += ',';
        out += format_double(s.g);
        out += fb ? ",1," : ",0,";
        if (fb) {
            out += format_double(trace.vfb_labels[next_event]);
            ++next_event;
        }
        out += '\n';
    }
    return out;
}

ConductanceTrace trace_from_csv(const std::string &text) {
    ConductanceTrace trace;
    bool header_seen = false;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        const auto fields = split_fields(line);
        if (!header_seen) {
            if (fields.size() != 5 || trim(fields[0]) != "t" || trim(fields[1]) != "v" ||
                trim(fields[2]) != "g" || trim(fields[3]) != "fb_flag" ||
                trim(fields[4]) != "vfb_label") {
                throw ParseError(line_no, "expected header 't,v,g,fb_flag,vfb_label'");
            }
            header_seen = true;
            return;
        }
        if (fields.size() != 5) {
            throw ParseError(line_no, "expected 5 fields, found " + std::to_string(fields.size()));
        }
        const double t = parse_number(fields[0], line_no, "t");
        const double v = parse_number(fields[1], line_no, "v");
        const double g = parse_number(fields[2], line_no, "g");
        const std::string_view flag = trim(fields[3]);
        const std::string_view label = trim(fields[4]);
        if (!trace.samples.empty() && !(t > trace.samples.back().t)) {
            throw ParseError(line_no, "sample times must be strictly increasing");
        }
        if (!(g >= 0.0)) {
            throw ParseError(line_no, "normalized conductance must be non-negative");
        }
        if (flag == "1") {
            if (label.empty()) {
                throw ParseError(line_no, "feedback row without vfb_label");
            }
            trace.fb_events.push_back(trace.samples.size());
            trace.vfb_labels.push_back(parse_number(label, line_no, "vfb_label"));
        } else if (flag == "0") {
            if (!label.empty()) {
                throw ParseError(line_no, "vfb_label given on a non-feedback row");
            }
        } else {
            throw ParseError(line_no, "fb_flag must be 0 or 1");
        }
        trace.samples.push_back({t, v, g});
    });
    if (trace.samples.empty()) {
        throw EmptyInputError("trace file contains no samples");
    }
    return trace;
}

Json transition_to_json(const TransitionMatrix &w) {
    Json j;
    j["levels"] = w.levels();
    Json rows = Json::array();
    for (std::size_t i = 0; i < w.z(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < w.z(); ++k) {
            row.push_back(w(i, k));
        }
        rows.push_back(std::move(row));
    }
    j["w"] = std::move(rows);
    return j;
}

TransitionMatrix transition_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("levels") || !j.contains("w")) {
        throw ParseError(0, "transition matrix JSON needs 'levels' and 'w'");
    }
    const Json &jl = j.at("levels");
    const Json &jw = j.at("w");
    if (!jl.is_array() || !jw.is_array()) {
        throw ParseError(0, "'levels' and 'w' must be arrays");
    }
    std::vector<double> levels;
    for (const Json &v : jl) {
        if (!v.is_number()) {
            throw ParseError(0, "'levels' entries must be numbers");
        }
        levels.push_back(v.get<double>());
    }
    const std::size_t z = levels.size();
    if (jw.size() != z) {
        throw ParseError(0, "'w' must have one row per level");
    }
    std::vector<int> entries;
    entries.reserve(z * z);
    for (const Json &row : jw) {
        if (!row.is_array() || row.size() != z) {
            throw ParseError(0, "'w' must be a square matrix");
        }
        for (const Json &v : row) {
            if (!v.is_number_integer()) {
                throw ParseError(0, "'w' entries must be integers");
            }
            entries.push_back(v.get<int>());
        }
    }
    try {
        return TransitionMatrix(std::move(levels), std::move(entries));
    } catch (const Error &e) {
        throw ParseError(0, e.what());
    }
}

Json qubo_to_json(const QuboProblem &q) {
    Json j;
    j["n_orders"] = q.n_orders();
    j["z_levels"] = q.z_levels();
    j["a"] = q.a();
    j["b"] = q.b();
    j["offset"] = q.offset();
    j["linear"] = q.linear();
    Json quad = Json::array();
    for (const QuadTerm &t : q.quadratic()) {
        quad.push_back(Json::array({t.i, t.j, t.coeff}));
    }
    j["quadratic"] = std::move(quad);
    if (q.transitions()) {
        j["transitions"] = transition_to_json(*q.transitions());
    }
    return j;
}

QuboProblem qubo_from_json(const Json &j) {
    try {
        std::vector<QuadTerm> quad;
        for (const Json &t : j.at("quadratic")) {
            if (!t.is_array() || t.size() != 3) {
                throw ParseError(0, "quadratic entries must be [i, j, coeff]");
            }
            quad.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<double>()});
        }
        std::optional<TransitionMatrix> w;
        if (j.contains("transitions")) {
            w = transition_from_json(j.at("transitions"));
        }
        return QuboProblem(j.at("n_orders").get<std::size_t>(), j.at("z_levels").get<std::size_t>(),
                           j.at("a").get<double>(), j.at("b").get<double>(),
                           j.at("offset").get<double>(), j.at("linear").get<std::vector<double>>(),
                           std::move(quad), std::move(w));
    } catch (const Json::exception &e) {
        throw ParseError(0, std::string("malformed QUBO JSON: ") + e.what());
    }
}

Json sa_params_to_json(const SaParams &p) {
    return Json{{"num_reads", p.num_reads},
                {"sweeps", p.sweeps},
                {"beta_hot", p.beta_hot},
                {"beta_cold", p.beta_cold},
                {"seed", p.seed}};
}

Json vqe_config_to_json(const VqeConfig &cfg) {
    Json j{{"shots", cfg.shots},
           {"iterations", cfg.iterations},
           {"trials", cfg.trials},
           {"evaluator", to_string(cfg.evaluator)},
           {"noise", to_string(cfg.noise)},
           {"seed", cfg.seed}};
    if (cfg.noise == NoiseProfile::symmetric) {
        j["noise_eps"] = cfg.noise_eps;
    }
    if (cfg.noise == NoiseProfile::custom && cfg.custom_noise) {
        j["eps01"] = cfg.custom_noise->eps01;
        j["eps10"] = cfg.custom_noise->eps10;
    }
    return j;
}

VqeConfig vqe_config_from_json(const Json &j) {
    VqeConfig cfg;
    try {
        if (!j.is_object()) {
            throw ParseError(0, "VQE config must be a JSON object");
        }
        if (j.contains("shots")) cfg.shots = j.at("shots").get<std::size_t>();
        if (j.contains("iterations")) cfg.iterations = j.at("iterations").get<std::size_t>();
        if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
        if (j.contains("evaluator")) {
            cfg.evaluator = parse_evaluator(j.at("evaluator").get<std::string>());
        }
        if (j.contains("noise")) cfg.noise = parse_noise_profile(j.at("noise").get<std::string>());
        if (j.contains("noise_eps")) cfg.noise_eps = j.at("noise_eps").get<double>();
        if (j.contains("eps01") || j.contains("eps10")) {
            cfg.custom_noise = NoiseModel{j.at("eps01").get<std::vector<double>>(),
                                          j.at("eps10").get<std::vector<double>>()};
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    } catch (const Json::exception &e) {
        throw ParseError(0, std::string("malformed VQE config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

Json schedule_to_json(const Schedule &s, const std::vector<double> &levels) {
    Json out = Json::array();
    for (std::size_t level : s.levels) {
        out.push_back(levels.at(level));
    }
    return out;
}

namespace {

std::string bits_string(const Bitstring &x) {
    std::string s(x.size(), '0');
    for (std::size_t k = 0; k < x.size(); ++k) {
        s[k] = x[k] ? '1' : '0';
    }
    return s;
}

std::vector<double> levels_of(const QuboProblem &q) {
    return q.transitions() ? q.transitions()->levels() : default_levels(q.z_levels());
}

} // namespace

std::string solver_result_to_jsonl(const SolverResult &r, const QuboProblem &q,
                                   const Json &summary_extra) {
    const std::vector<double> levels = levels_of(q);
    std::string out;
    std::size_t best_trial = r.per_trial.size();
    for (std::size_t i = 0; i < r.per_trial.size(); ++i) {
        const TrialRecord &t = r.per_trial[i];
        if (best_trial == r.per_trial.size() && t.energy == r.best_energy) {
            best_trial = i;
        }
        Json rec{{"type", "trial"},
                 {"index", i},
                 {"energy", t.energy},
                 {"feasible", t.feasible},
                 {"schedule", t.schedule ? schedule_to_json(*t.schedule, levels) : Json()},
                 {"s_max", t.s_max ? Json(*t.s_max) : Json()},
                 {"bits", bits_string(t.bits)}};
        out += rec.dump();
        out += '\n';
    }
    Json summary{{"type", "summary"},
                 {"n_orders", q.n_orders()},
                 {"z_levels", q.z_levels()},
                 {"best_trial", best_trial},
                 {"best_energy", r.best_energy},
                 {"feasible", r.feasible},
                 {"schedule", r.schedule ? schedule_to_json(*r.schedule, levels) : Json()},
                 {"s_max", r.s_max ? Json(*r.s_max) : Json()},
                 {"bits", bits_string(r.best_bits)}};
    if (summary_extra.is_object()) {
        for (const auto &[key, value] : summary_extra.items()) {
            summary[key] = value;
        }
    }
    out += summary.dump();
    out += '\n';
    return out;
}

std::string trajectory_to_csv(const std::vector<TrajectoryPoint> &points, const Json &config) {
    std::string out = config_comment(config);
    out += "iteration,objective,best_energy_so_far\n";
    for (const TrajectoryPoint &p : points) {
        out += std::to_string(p.iteration);
        out += ',';
        out += format_double(p.objective);
        out += ',';
        out += format_double(p.best_energy_so_far);
        out += '\n';
    }
    return out;
}

namespace {

std::string schedule_field(const std::vector<double> &percent) {
    std::string s = "[";
    for (std::size_t i = 0; i < percent.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += format_double(percent[i]);
    }
    return s + "]";
}

// Splits one CSV line honouring double-quoted fields.
std::vector<std::string> split_quoted(std::string_view line) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

} // namespace

std::string sweep_to_csv(const std::vector<SweepRow> &rows, const Json &config) {
    std::string out = config_comment(config);
    out += "backend,n,e_res_mean,e_res_std,s_max_mean,s_max_std,best_schedule,trials,"
           "feasible_trials\n";
    for (const SweepRow &r : rows) {
        const bool any = r.feasible_trials > 0;
        out += r.backend + ',' + std::to_string(r.n) + ',' + format_double(r.e_res.mean) + ',' +
               format_double(r.e_res.std) + ',' + (any ? format_double(r.s_max.mean) : "") +
               ',' + (any ? format_double(r.s_max.std) : "") + ",\"" +
               schedule_field(r.best_schedule) + "\"," + std::to_string(r.trials) + ',' +
               std::to_string(r.feasible_trials) + '\n';
    }
    return out;
}

std::vector<SweepRow> sweep_from_csv(const std::string &text) {
    std::vector<SweepRow> rows;
    bool header_seen = false;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        const auto f = split_quoted(line);
        if (!header_seen) {
            if (f.size() < 7 || f[0] != "backend") {
                throw ParseError(line_no, "expected sweep CSV header");
            }
            header_seen = true;
            return;
        }
        if (f.size() < 7) {
            throw ParseError(line_no, "expected at least 7 fields");
        }
        SweepRow r;
        r.backend = f[0];
        r.n = static_cast<std::size_t>(parse_number(f[1], line_no, "n"));
        r.e_res = {parse_number(f[2], line_no, "e_res_mean"),
                   parse_number(f[3], line_no, "e_res_std")};
        if (!trim(f[4]).empty()) {
            r.s_max = {parse_number(f[4], line_no, "s_max_mean"),
                       parse_number(f[5], line_no, "s_max_std")};
        }
        std::string_view sched = trim(f[6]);
        if (sched.size() < 2 || sched.front() != '[' || sched.back() != ']') {
            throw ParseError(line_no, "best_schedule must look like [20, 60]");
        }
        sched = sched.substr(1, sched.size() - 2);
        if (!trim(sched).empty()) {
            for (std::string_view item : split_fields(sched)) {
                r.best_schedule.push_back(parse_number(item, line_no, "best_schedule"));
            }
        }
        if (f.size() >= 9) {
            r.trials = static_cast<std::size_t>(parse_number(f[7], line_no, "trials"));
            r.feasible_trials =
                static_cast<std::size_t>(parse_number(f[8], line_no, "feasible_trials"));
        }
        rows.push_back(std::move(r));
    });
    if (!header_seen) {
        throw EmptyInputError("sweep CSV is empty");
    }
    return rows;
}

Json sweep_to_json(const std::vector<SweepRow> &rows, const Json &config) {
    Json out;
    out["config"] = config;
    Json jr = Json::array();
    for (const SweepRow &r : rows) {
        Json per_repeat = Json::array();
        for (const MeanStd &m : r.per_repeat) {
            per_repeat.push_back(Json{{"e_res_mean", m.mean}, {"e_res_std", m.std}});
        }
        const bool any = r.feasible_trials > 0;
        jr.push_back(Json{{"backend", r.backend},
                          {"n", r.n},
                          {"e_res_mean", r.e_res.mean},
                          {"e_res_std", r.e_res.std},
                          {"s_max_mean", any ? Json(r.s_max.mean) : Json()},
                          {"s_max_std", any ? Json(r.s_max.std) : Json()},
                          {"best_schedule", r.best_schedule},
                          {"trials", r.trials},
                          {"feasible_trials", r.feasible_trials},
                          {"per_repeat", std::move(per_repeat)}});
    }
    out["rows"] = std::move(jr);
    return out;
}

} // namespace fcesched
