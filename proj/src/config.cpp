#include "sts/config.hpp"

#include "sts/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sts {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
    throw Error(Errc::ConfigError, "bad value for '" + std::string(key) + "': '" + std::string(value) + "'");
}

std::uint64_t to_uint(std::string_view key, std::string_view v)
{
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        bad_value(key, v);
    return out;
}

double to_double(std::string_view key, std::string_view v)
{
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        bad_value(key, v);
    return out;
}

bool to_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    bad_value(key, v);
}

template <class T, class Conv>
std::vector<T> to_list(std::string_view key, std::string_view v, Conv conv)
{
    std::vector<T> out;
    while (!v.empty()) {
        const auto comma = v.find(',');
        const auto item = trim(v.substr(0, comma));
        if (item.empty())
            bad_value(key, v);
        out.push_back(static_cast<T>(conv(key, item)));
        if (comma == std::string_view::npos)
            break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

template <class T>
std::string join(const std::vector<T>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_number(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

} // namespace

ExperimentFile parse_experiment(std::string_view text)
{
    ExperimentFile f;
    auto& s = f.sim;
    auto& v = f.validation;

    using Setter = std::function<void(std::string_view, std::string_view)>;
    const std::map<std::string_view, Setter> setters = {
        {"field", [&](auto k, auto x) { s.field_order = static_cast<std::uint32_t>(to_uint(k, x)); }},
        {"n", [&](auto k, auto x) { s.n = to_uint(k, x); }},
        {"k", [&](auto k, auto x) { s.k = to_uint(k, x); }},
        {"subcarriers", [&](auto k, auto x) { s.subcarriers = v.subcarriers = to_uint(k, x); }},
        {"users", [&](auto k, auto x) { s.users = to_uint(k, x); }},
        {"n_rx", [&](auto k, auto x) { s.n_rx = to_uint(k, x); }},
        {"n_tx", [&](auto k, auto x) { s.n_tx = to_uint(k, x); }},
        {"noise_var", [&](auto k, auto x) { s.noise_var = v.noise_var = to_double(k, x); }},
        {"fading",
         [&](auto k, auto x) {
             if (x == "rayleigh")
                 s.fading = Fading::Rayleigh;
             else if (x == "awgn")
                 s.fading = Fading::AwgnOnly;
             else
                 bad_value(k, x);
         }},
        {"fade_correlation", [&](auto k, auto x) { s.fade_correlation = to_double(k, x); }},
        {"target_far", [&](auto k, auto x) { s.target_far = to_double(k, x); }},
        {"sir_db", [&](auto k, auto x) { s.sir_db = to_list<double>(k, x, to_double); }},
        {"trials", [&](auto k, auto x) { s.trials = to_uint(k, x); }},
        {"tau", [&](auto k, auto x) { s.tau = to_uint(k, x); }},
        {"seed", [&](auto k, auto x) { s.master_seed = v.seed = to_uint(k, x); }},
        {"allow_over_bound", [&](auto k, auto x) { s.allow_over_bound = to_bool(k, x); }},
        {"workers", [&](auto k, auto x) { s.workers = static_cast<unsigned>(to_uint(k, x)); }},
        {"samples", [&](auto k, auto x) { v.samples = to_uint(k, x); }},
        {"validate_sir_db", [&](auto k, auto x) { v.sir_db = to_double(k, x); }},
        {"validate_n_rx", [&](auto k, auto x) { v.n_rx = to_list<std::size_t>(k, x, to_uint); }},
        {"validate_n_user", [&](auto k, auto x) { v.n_user = to_list<std::size_t>(k, x, to_uint); }},
        {"validate_far", [&](auto k, auto x) { v.far = to_list<double>(k, x, to_double); }},
        {"validate_thresholds", [&](auto k, auto x) { v.thresholds = to_list<double>(k, x, to_double); }},
    };

    std::set<std::string, std::less<>> seen;
    std::size_t lineno = 0;
    while (!text.empty()) {
        ++lineno;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
        if (!seen.insert(std::string(key)).second)
            throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": duplicate key '" + std::string(key) + "'");
        it->second(key, value);
    }
    return f;
}

ExperimentFile load_experiment(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw Error(Errc::ConfigError, "cannot read config file " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_experiment(ss.str());
}

std::string render(const SimConfig& c)
{
    std::ostringstream os;
    os << "field = " << c.field_order << '\n'
       << "n = " << c.n << '\n'
       << "k = " << c.k << '\n'
       << "subcarriers = " << c.subcarriers << '\n'
       << "users = " << c.users << '\n'
       << "n_rx = " << c.n_rx << '\n'
       << "n_tx = " << c.n_tx << '\n'
       << "noise_var = " << format_number(c.noise_var) << '\n'
       << "fading = " << (c.fading == Fading::Rayleigh ? "rayleigh" : "awgn") << '\n'
       << "fade_correlation = " << format_number(c.fade_correlation) << '\n'
       << "target_far = " << format_number(c.target_far) << '\n'
       << "sir_db = " << join(c.sir_db) << '\n'
       << "trials = " << c.trials << '\n'
       << "tau = " << c.tau << '\n'
       << "seed = " << c.master_seed << '\n'
       << "allow_over_bound = " << (c.allow_over_bound ? "true" : "false") << '\n'
       << "workers = " << c.workers << '\n';
    return os.str();
}

std::string render(const ValidationConfig& c)
{
    std::ostringstream os;
    os << "noise_var = " << format_number(c.noise_var) << '\n'
       << "subcarriers = " << c.subcarriers << '\n'
       << "validate_sir_db = " << format_number(c.sir_db) << '\n'
       << "validate_n_rx = " << join(c.n_rx) << '\n'
       << "validate_n_user = " << join(c.n_user) << '\n'
       << "validate_far = " << join(c.far) << '\n'
       << "validate_thresholds = " << join(c.thresholds) << '\n'
       << "samples = " << c.samples << '\n'
       << "seed = " << c.seed << '\n';
    return os.str();
}

} // namespace sts
