#include "locsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "locsim/errors.hpp"
#include "locsim/format.hpp"

namespace locsim {

namespace {

SystemConfig scenario(int n, double p_base, int split, double q_first, double q_rest) {
    SystemConfig c;
    c.tau = 20;
    c.window_T = 100;
    c.epsilon = 5.0;
    c.horizon = 10'000;
    c.seed = 1;
    c.cost = CostSpec::quadratic();
    for (int i = 1; i <= n; ++i) {
        // Rounded to the nearest hundredth so that 0.9 - 0.05*1 prints as 0.85.
        const double p = std::round((p_base - 0.05 * i) * 100.0) / 100.0;
        c.clients.push_back({i, p, i <= split ? q_first : q_rest});
    }
    return c;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class Parser {
public:
    Parser(std::string_view text, std::string source) : source_(std::move(source)) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto end = text.find('\n', pos);
            std::string_view line = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (!line.empty()) {
                const auto eq = line.find('=');
                if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
                const std::string key(trim(line.substr(0, eq)));
                if (key.empty()) fail(line_no, "missing key before '='");
                if (entries_.count(key)) fail(line_no, key + ": duplicate key");
                entries_[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
            }
            if (end == std::string_view::npos) break;
            pos = end + 1;
        }
        for (const auto& [key, entry] : entries_) {
            static const char* known[] = {"tau", "window_T", "epsilon", "horizon", "seed", "cost", "p", "q"};
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) fail(entry.line, key + ": unknown key");
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail_missing(const std::string& key) const {
        throw ConfigError(source_ + ": " + key + ": missing required key");
    }

    const Entry* find(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    int line_of(const std::string& key) const {
        const Entry* e = find(key);
        return e ? e->line : 0;
    }

    template <typename T>
    T number(const std::string& key, std::string_view token, int line) const {
        T value{};
        const auto* first = token.data();
        const auto* last = token.data() + token.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (token.empty() || ec != std::errc{} || ptr != last) {
            fail(line, key + ": invalid number '" + std::string(token) + "'");
        }
        return value;
    }

    template <typename T>
    std::optional<T> scalar(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        return number<T>(key, e->value, e->line);
    }

    std::vector<double> list(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) fail_missing(key);
        std::vector<double> out;
        std::string_view rest = e->value;
        while (true) {
            const auto comma = rest.find(',');
            out.push_back(number<double>(key, trim(rest.substr(0, comma)), e->line));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

} // namespace

SystemConfig preset(std::string_view name) {
    if (name == "high") return scenario(12, 0.9, 6, 0.85, 0.75);
    if (name == "low") return scenario(18, 1.0, 9, 0.5, 0.35);
    throw UsageError("unknown scenario '" + std::string(name) + "' (expected high or low)");
}

SystemConfig parse_config(std::string_view text, const std::string& source) {
    const Parser in(text, source);
    SystemConfig c;

    if (auto v = in.scalar<int>("tau")) c.tau = *v;
    if (c.tau < 1) in.fail(in.line_of("tau"), "tau: must be >= 1");
    if (auto v = in.scalar<int>("window_T")) c.window_T = *v;
    if (c.window_T < 1) in.fail(in.line_of("window_T"), "window_T: must be >= 1");
    if (auto v = in.scalar<double>("epsilon")) c.epsilon = *v;
    if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) {
        in.fail(in.line_of("epsilon"), "epsilon: must be finite and >= 0");
    }
    if (auto v = in.scalar<std::int64_t>("horizon")) c.horizon = *v;
    if (c.horizon <= c.window_T) {
        const int line = in.find("horizon") ? in.line_of("horizon") : in.line_of("window_T");
        in.fail(line, "horizon: must exceed window_T");
    }
    if (auto v = in.scalar<std::uint64_t>("seed")) c.seed = *v;

    if (const Entry* e = in.find("cost")) {
        if (e->value == "quadratic") {
            c.cost = CostSpec::quadratic();
        } else if (e->value.rfind("power:", 0) == 0) {
            const double k = in.number<double>("cost", std::string_view(e->value).substr(6), e->line);
            if (!(k > 1.0) || !std::isfinite(k)) in.fail(e->line, "cost: power exponent must be > 1");
            c.cost = CostSpec::power(k);
        } else {
            in.fail(e->line, "cost: expected 'quadratic' or 'power:<k>'");
        }
    }

    const auto p = in.list("p");
    const auto q = in.list("q");
    if (p.size() != q.size()) {
        in.fail(in.line_of("q"), "q: has " + std::to_string(q.size()) + " entries but p has " +
                                     std::to_string(p.size()));
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= kMinSuccessProbability && p[i] <= 1.0)) {
            in.fail(in.line_of("p"), "p: entry " + std::to_string(i + 1) + " = " + format_double(p[i]) +
                                         " outside [0.01, 1]");
        }
        if (!(q[i] >= 0.0 && q[i] <= 1.0)) {
            in.fail(in.line_of("q"), "q: entry " + std::to_string(i + 1) + " = " + format_double(q[i]) +
                                         " outside [0, 1]");
        }
        c.clients.push_back({static_cast<int>(i) + 1, p[i], q[i]});
    }
    c.validate();
    return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string format_config(const SystemConfig& config) {
    std::string out;
    out += "tau = " + std::to_string(config.tau) + "\n";
    out += "window_T = " + std::to_string(config.window_T) + "\n";
    out += "epsilon = " + format_double(config.epsilon) + "\n";
    out += "horizon = " + std::to_string(config.horizon) + "\n";
    out += "seed = " + std::to_string(config.seed) + "\n";
    out += "cost = " + config.cost.to_string() + "\n";
    std::string p_line = "p = ";
    std::string q_line = "q = ";
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (i) {
            p_line += ", ";
            q_line += ", ";
        }
        p_line += format_double(config.clients[i].p);
        q_line += format_double(config.clients[i].q);
    }
    return out + p_line + "\n" + q_line + "\n";
}

} // namespace locsim
