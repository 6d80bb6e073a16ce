#include "simplel/bench/config.hpp"

#include "simplel/problem_io.hpp"
#include "simplel/rules.hpp"
#include "simplel/convex/rules.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace simplel::bench
{

namespace
{

double to_double(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ParameterError("invalid number for " + what + ": '" + text + "'");
    return v;
}

long long to_integer(const std::string& text, const std::string& what)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ParameterError("invalid integer for " + what + ": '" + text + "'");
    return v;
}

std::uint64_t to_seed(const std::string& text)
{
    const std::string t = trim(text);
    char* end = nullptr;
    errno = 0;
    if (!t.empty() && t[0] == '-')
        throw ParameterError("seed must be nonnegative: '" + text + "'");
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ParameterError("invalid seed: '" + text + "'");
    return v;
}

std::map<std::string, std::string> parse_keyvals(const std::string& text, const std::string& kind)
{
    std::map<std::string, std::string> out;
    if (trim(text).empty())
        return out;
    for (const auto& item : split_list(text)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ParameterError(kind + " problem: expected key=value, got '" + item + "'");
        out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

void reject_unknown(const std::map<std::string, std::string>& kv, std::initializer_list<const char*> allowed,
                    const std::string& kind)
{
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || k == a;
        if (!ok)
            throw ParameterError(kind + " problem: unknown key '" + k + "'");
    }
}

} // namespace

std::string format_number(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    if (std::strtod(buf, nullptr) != value)
        std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string trim(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

ProblemSpec parse_problem_spec(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = trim(text.substr(0, colon));
    const std::string rest = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    ProblemSpec spec;
    if (kind == "file") {
        spec.kind = ProblemKind::File;
        spec.path = trim(rest);
        if (spec.path.empty())
            throw ParameterError("file problem: missing path");
        return spec;
    }
    const auto kv = parse_keyvals(rest, kind);
    auto get = [&](const char* key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (kind == "diag" || kind == "diagonal") {
        reject_unknown(kv, {"s", "mu", "n", "margin"}, "diag");
        spec.kind = ProblemKind::Diagonal;
        if (auto v = get("s"))
            spec.s = to_double(*v, "s");
        if (auto v = get("mu"))
            spec.mu = to_double(*v, "mu");
        if (auto v = get("n"))
            spec.n = to_integer(*v, "n");
        if (auto v = get("margin"))
            spec.margin = to_double(*v, "margin");
        if (!(spec.s > 0) || !(spec.mu > 0) || spec.n < 1 || spec.margin < 0)
            throw ParameterError("diag problem: need s > 0, mu > 0, n >= 1, margin >= 0");
    } else if (kind == "heat") {
        reject_unknown(kv, {"n", "solution"}, "heat");
        spec.kind = ProblemKind::Heat;
        spec.n = 64;
        if (auto v = get("n"))
            spec.n = to_integer(*v, "n");
        if (auto v = get("solution")) {
            if (*v == "standard")
                spec.heat_solution = HeatSolution::Standard;
            else if (*v == "blocky")
                spec.heat_solution = HeatSolution::Blocky;
            else
                throw ParameterError("heat problem: solution must be standard or blocky");
        }
    } else if (kind == "radon") {
        reject_unknown(kv, {"img", "angles", "rays"}, "radon");
        spec.kind = ProblemKind::Radon;
        if (auto v = get("img"))
            spec.img_n = to_integer(*v, "img");
        spec.angles = spec.rays = std::max<Eigen::Index>(spec.img_n + spec.img_n / 2, 4);
        if (auto v = get("angles"))
            spec.angles = to_integer(*v, "angles");
        if (auto v = get("rays"))
            spec.rays = to_integer(*v, "rays");
    } else {
        throw ParameterError("unknown problem kind '" + kind + "' (expected diag, heat, radon or file)");
    }
    return spec;
}

std::string format_problem_spec(const ProblemSpec& spec)
{
    std::ostringstream out;
    switch (spec.kind) {
    case ProblemKind::Diagonal:
        out << "diag:s=" << format_number(spec.s) << ",mu=" << format_number(spec.mu) << ",n=" << spec.n;
        if (spec.margin != 0.1)
            out << ",margin=" << format_number(spec.margin);
        break;
    case ProblemKind::Heat:
        out << "heat:n=" << spec.n << ",solution="
            << (spec.heat_solution == HeatSolution::Blocky ? "blocky" : "standard");
        break;
    case ProblemKind::Radon:
        out << "radon:img=" << spec.img_n << ",angles=" << spec.angles << ",rays=" << spec.rays;
        break;
    case ProblemKind::File:
        out << "file:" << spec.path;
        break;
    }
    return out.str();
}

std::shared_ptr<const SpectralProblem<double>> build_problem(const ProblemSpec& spec)
{
    switch (spec.kind) {
    case ProblemKind::Diagonal:
        return std::make_shared<const SpectralProblem<double>>(
            make_diagonal_problem<double>(spec.n, spec.s, mu_to_p(spec.s, spec.mu, spec.margin)));
    case ProblemKind::Heat:
        return std::make_shared<const SpectralProblem<double>>(make_heat_problem(spec.n, spec.heat_solution));
    case ProblemKind::Radon:
        return std::make_shared<const SpectralProblem<double>>(make_radon_problem(spec.img_n, spec.angles, spec.rays));
    case ProblemKind::File:
        return std::make_shared<const SpectralProblem<double>>(load_problem(spec.path));
    }
    throw ParameterError("unknown problem kind");
}

double default_noise_decay(const ProblemSpec& spec)
{
    return spec.is_matrix() ? 0.0 : 0.6;
}

GridSpec parse_grid_spec(const std::string& text)
{
    GridSpec g;
    const std::string t = trim(text);
    if (t.empty() || t == "auto" || t == "default")
        return g;
    const auto parts = split_list(t);
    if (parts.size() == 1) {
        g.count = to_integer(parts[0], "grid count");
    } else if (parts.size() == 3) {
        g.alpha_min = to_double(parts[0], "grid min");
        g.alpha_max = to_double(parts[1], "grid max");
        g.count = to_integer(parts[2], "grid count");
    } else {
        throw ParameterError("grid: expected min,max,count or a count, got '" + text + "'");
    }
    if (g.count && *g.count < 3)
        throw ParameterError("grid: count must be at least 3");
    return g;
}

std::string format_grid_spec(const GridSpec& spec)
{
    if (spec.alpha_min && spec.alpha_max && spec.count)
        return format_number(*spec.alpha_min) + "," + format_number(*spec.alpha_max) + "," +
               std::to_string(*spec.count);
    if (spec.count)
        return std::to_string(*spec.count);
    return "auto";
}

AlphaGrid<double> build_grid(const GridSpec& spec, const SpectralProblem<double>& problem, Eigen::Index default_count)
{
    const Eigen::Index count = spec.count.value_or(default_count);
    if (spec.alpha_min && spec.alpha_max)
        return AlphaGrid<double>(*spec.alpha_min, *spec.alpha_max, count);
    return default_grid(problem, count);
}

std::string_view metric_name(Metric m)
{
    switch (m) {
    case Metric::L2:
        return "l2";
    case Metric::L1:
        return "l1";
    case Metric::Strict:
        return "strict";
    }
    return "?";
}

Metric parse_metric(const std::string& text)
{
    const std::string t = trim(text);
    if (t == "l2")
        return Metric::L2;
    if (t == "l1")
        return Metric::L1;
    if (t == "strict")
        return Metric::Strict;
    throw ParameterError("unknown metric '" + text + "' (expected l2, l1 or strict)");
}

Metric ExperimentConfig::effective_metric() const
{
    if (metric)
        return *metric;
    if (!penalty)
        return Metric::L2;
    switch (*penalty) {
    case convex::PenaltyKind::L1:
        return Metric::L1;
    case convex::PenaltyKind::TV1D:
        return Metric::Strict;
    case convex::PenaltyKind::Lp32:
        return Metric::L2;
    }
    return Metric::L2;
}

double ExperimentConfig::effective_noise_decay() const
{
    return noise_decay.value_or(default_noise_decay(problem));
}

std::vector<std::string> default_rules(bool convex)
{
    std::vector<std::string> out;
    if (convex) {
        for (auto r : convex::kAllConvexRules)
            out.emplace_back(convex::convex_rule_name(r));
    } else {
        for (auto r : kAllRules)
            out.emplace_back(rule_name(r));
    }
    return out;
}

void ExperimentConfig::validate() const
{
    if (levels.empty())
        throw ParameterError(name + ": no noise levels");
    for (double l : levels)
        if (!(l > 0.0 && l <= 1.0))
            throw ParameterError(name + ": noise levels must lie in (0, 1]");
    if (runs < 1)
        throw ParameterError(name + ": runs must be at least 1");
    if (rules.empty())
        throw ParameterError(name + ": empty rule list");
    for (const auto& r : rules) {
        const bool ok = is_convex() ? convex::parse_convex_rule(r).has_value() : parse_rule(r).has_value();
        if (!ok)
            throw ParameterError(name + ": unknown rule '" + r + "'" + (is_convex() ? " for a convex experiment" : ""));
    }
    if (!is_convex() && effective_metric() == Metric::Strict)
        throw ParameterError(name + ": the strict metric needs a penalty");
}

namespace
{

void apply_key(ExperimentConfig& c, const std::string& key, const std::string& value, int line)
{
    const std::string where = "line " + std::to_string(line) + ": ";
    try {
        if (key == "problem") {
            c.problem = parse_problem_spec(value);
        } else if (key == "levels") {
            c.levels.clear();
            for (const auto& v : split_list(value))
                c.levels.push_back(to_double(v, "levels"));
        } else if (key == "runs") {
            c.runs = static_cast<int>(to_integer(value, "runs"));
        } else if (key == "rules") {
            c.rules = split_list(value);
        } else if (key == "grid") {
            c.grid = parse_grid_spec(value);
        } else if (key == "seed") {
            c.seed_base = to_seed(value);
        } else if (key == "metric") {
            c.metric = parse_metric(value);
        } else if (key == "penalty") {
            if (trim(value) == "none") {
                c.penalty.reset();
            } else {
                auto p = convex::parse_penalty(trim(value));
                if (!p)
                    throw ParameterError("unknown penalty '" + value + "' (expected l1, l1.5 or tv)");
                c.penalty = *p;
            }
        } else if (key == "noise_decay") {
            c.noise_decay = to_double(value, "noise_decay");
        } else {
            throw ParameterError("unknown key '" + key + "'");
        }
    } catch (const ParameterError& e) {
        throw ParameterError(where + e.what());
    }
}

} // namespace

std::vector<ExperimentConfig> parse_config(std::istream& in)
{
    std::vector<ExperimentConfig> out;
    std::string raw;
    int line_no = 0;
    bool open = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ParameterError("line " + std::to_string(line_no) + ": malformed section header");
            ExperimentConfig c;
            c.name = trim(line.substr(1, line.size() - 2));
            for (const auto& other : out)
                if (other.name == c.name)
                    throw ParameterError("line " + std::to_string(line_no) + ": duplicate section '" + c.name + "'");
            out.push_back(std::move(c));
            open = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("line " + std::to_string(line_no) + ": expected key = value");
        if (!open) {
            out.emplace_back();
            open = true;
        }
        apply_key(out.back(), trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
    }
    if (out.empty())
        throw ParameterError("config defines no experiment");
    for (auto& c : out) {
        if (c.rules.empty())
            c.rules = default_rules(c.is_convex());
        c.validate();
    }
    return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config file '" + path + "'");
    return parse_config(in);
}

std::string format_config(const ExperimentConfig& c)
{
    std::ostringstream out;
    out << "[" << c.name << "]\n";
    out << "problem = " << format_problem_spec(c.problem) << "\n";
    out << "levels = ";
    for (std::size_t i = 0; i < c.levels.size(); ++i)
        out << (i ? ", " : "") << format_number(c.levels[i]);
    out << "\nruns = " << c.runs << "\nrules = ";
    for (std::size_t i = 0; i < c.rules.size(); ++i)
        out << (i ? ", " : "") << c.rules[i];
    out << "\ngrid = " << format_grid_spec(c.grid);
    out << "\nseed = " << c.seed_base;
    out << "\nmetric = " << metric_name(c.effective_metric());
    if (c.penalty)
        out << "\npenalty = " << convex::penalty_name(*c.penalty);
    out << "\nnoise_decay = " << format_number(c.effective_noise_decay()) << "\n";
    return out.str();
}

} // namespace simplel::bench
