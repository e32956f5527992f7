#include "cli.hpp"

#include "sts/codec.hpp"
#include "sts/config.hpp"
#include "sts/error.hpp"
#include "sts/phy.hpp"
#include "sts/rcrm.hpp"
#include "sts/simkit.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>

namespace sts::cli {

namespace {

struct CodeFlags {
    std::uint32_t field = 0;
    std::size_t n = 0;
    std::size_t k = 1;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--field", field, "Field order D (prime)")->required();
        cmd->add_option("--n", n, "Block length N (OFDM symbols), must divide D-1")->required();
        cmd->add_option("--k", k, "Message length K in field symbols")->capture_default_str();
    }

    CodeParams params() const { return CodeParams(Field(field), n, k); }
    std::string describe() const
    {
        return "field=" + std::to_string(field) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
    }
};

std::vector<std::uint64_t> parse_integers(const std::string& text)
{
    std::vector<std::uint64_t> out;
    std::string token;
    auto flush = [&] {
        if (token.empty())
            return;
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size() || token.front() == '-')
            throw Error(Errc::ConfigError, "not a non-negative integer: '" + token + "'");
        out.push_back(v);
        token.clear();
    };
    for (char ch : text) {
        if (ch == ' ' || ch == ',' || ch == '\t')
            flush();
        else
            token += ch;
    }
    flush();
    return out;
}

std::vector<FieldElement> parse_codeword(const std::string& text, const CodeParams& params)
{
    std::vector<FieldElement> c;
    for (auto v : parse_integers(text))
        c.push_back(params.field().element(v));
    if (c.size() != params.n())
        throw Error(Errc::ConfigError, "codeword needs " + std::to_string(params.n()) + " indices, got " +
                                           std::to_string(c.size()));
    return c;
}

DetectionGrid parse_detections(const std::string& text, const CodeParams& params)
{
    DetectionGrid grid;
    grid.subcarriers = params.order();
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, ';')) {
        std::vector<std::uint32_t> set;
        for (auto v : parse_integers(part)) {
            if (v >= params.order())
                throw Error(Errc::ConfigError, "detected index " + std::to_string(v) + " outside the field");
            set.push_back(static_cast<std::uint32_t>(v));
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        grid.symbols.push_back(std::move(set));
    }
    if (!text.empty() && text.back() == ';')
        grid.symbols.emplace_back();
    if (grid.symbols.size() != params.n())
        throw Error(Errc::ConfigError, "detections need " + std::to_string(params.n()) +
                                           " ';'-separated symbol sets, got " + std::to_string(grid.symbols.size()));
    return grid;
}

std::string join_indices(std::span<const FieldElement> c)
{
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i)
            out += ' ';
        out += std::to_string(c[i].value());
    }
    return out;
}

void print_commented(std::ostream& out, const std::string& block)
{
    std::istringstream is(block);
    std::string line;
    while (std::getline(is, line))
        out << "# " << line << '\n';
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Coded single-tone signaling simulator. Codeword and subcarrier indices are 0-based."};
    app.require_subcommand(1);

    CodeFlags code;

    // encode
    std::uint64_t message = 0;
    bool show_rcrm = false;
    auto* encode_cmd = app.add_subcommand("encode", "Encode a message into subcarrier indices");
    code.attach(encode_cmd);
    encode_cmd->add_option("--message", message, "Message m, 0 <= m < D^K")->required();
    encode_cmd->add_flag("--rcrm", show_rcrm, "Also print the 9-bit request fields (needs D^K >= 512)");

    // decode
    std::string detections;
    std::size_t tau = 0;
    auto* decode_cmd = app.add_subcommand("decode", "List-decode messages from detected tone sets");
    code.attach(decode_cmd);
    decode_cmd->add_option("--detections", detections,
                           "Per-symbol detected indices: sets separated by ';', indices by ',' or space")
        ->required();
    decode_cmd->add_option("--tau", tau, "Acceptance threshold (default ceil((N+K-1)/2))");

    // offset
    std::string codeword;
    auto* offset_cmd = app.add_subcommand("offset", "Estimate and remove a frequency offset");
    code.attach(offset_cmd);
    offset_cmd->add_option("--codeword", codeword, "Received indices c'_1..c'_N")->required();

    // validate
    std::string validate_config;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> validate_seed;
    bool perturb = false;
    auto* validate_cmd =
        app.add_subcommand("validate", "Compare empirical detector rates with the closed-form probabilities");
    validate_cmd->add_option("--config", validate_config, "Experiment file (key = value)");
    validate_cmd->add_option("--samples", samples, "Tones per cell");
    validate_cmd->add_option("--seed", validate_seed, "Master seed");
    validate_cmd->add_flag("--perturb", perturb, "Scale analytic probabilities by 1.1 (negative control)");

    // sweep
    std::string sweep_config;
    std::string sweep_out;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<unsigned> workers;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a multi-user SIR sweep and write CSV");
    sweep_cmd->add_option("--config", sweep_config, "Experiment file (key = value)")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output CSV path")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "Master seed (overrides the file)");
    sweep_cmd->add_option("--workers", workers, "Worker threads (overrides the file)");

    // params
    double far = 1e-2;
    double noise_var = 1.0;
    std::size_t n_rx = 1;
    auto* params_cmd = app.add_subcommand("params", "Print derived code and detector quantities");
    code.attach(params_cmd);
    params_cmd->add_option("--far", far, "Target false-alarm rate")->capture_default_str();
    params_cmd->add_option("--noise-var", noise_var, "Noise variance per antenna")->capture_default_str();
    params_cmd->add_option("--n-rx", n_rx, "Receive antennas")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (encode_cmd->parsed()) {
            const auto params = code.params();
            out << "# " << code.describe() << " t=" << params.t() << " rho=" << params.rho()
                << " message=" << message << '\n';
            const GftContext ctx(params);
            const auto c = encode(message, ctx);
            out << join_indices(c.symbols) << '\n';
            if (show_rcrm) {
                if (params.message_space() < kRcrmSpace)
                    throw Error(Errc::InvalidParameters, "--rcrm needs D^K >= 512");
                out << to_string(rcrm_unpack(message)) << '\n';
            }
        } else if (decode_cmd->parsed()) {
            const auto params = code.params();
            DecoderConfig dec;
            dec.tau = tau == 0 ? default_tau(params) : tau;
            out << "# " << code.describe() << " tau=" << dec.tau << '\n';
            const auto decoded = decode_multiuser(parse_detections(detections, params), params, dec);
            out << "messages=";
            for (std::size_t i = 0; i < decoded.size(); ++i)
                out << (i ? " " : "") << decoded[i];
            out << '\n';
        } else if (offset_cmd->parsed()) {
            const auto params = code.params();
            out << "# " << code.describe() << '\n';
            const GftContext ctx(params);
            const auto received = parse_codeword(codeword, params);
            const auto delta = estimate_offset(received, ctx);
            const auto corrected = correct_offset(received, delta);
            out << "delta=" << delta.value();
            if (is_valid_codeword(corrected.symbols, ctx))
                out << " codeword=" << join_indices(corrected.symbols)
                    << " m=" << codeword_message(corrected.symbols, ctx) << '\n';
            else
                out << " INVALID\n";
        } else if (validate_cmd->parsed()) {
            ValidationConfig vc;
            if (!validate_config.empty())
                vc = load_experiment(validate_config).validation;
            if (samples)
                vc.samples = *samples;
            if (validate_seed)
                vc.seed = *validate_seed;
            if (perturb)
                vc.analytic_scale = 1.1;
            vc.validate();
            print_commented(out, render(vc));
            const auto report = validate_detection(vc);
            out << format_report(report);
            return report.passed() ? kSuccess : kValidationFailed;
        } else if (sweep_cmd->parsed()) {
            auto cfg = load_experiment(sweep_config).sim;
            if (sweep_seed)
                cfg.master_seed = *sweep_seed;
            if (workers)
                cfg.workers = *workers;
            const Experiment experiment(cfg);
            print_commented(out, render(cfg));
            out << "# threshold = " << format_number(experiment.threshold()) << "\n# tau = " << experiment.tau()
                << '\n';
            const auto result = experiment.run_sweep();
            export_csv(result, sweep_out);
            for (const auto& p : result.points)
                out << "sir_db=" << format_number(p.sir_db) << " erasure=" << format_number(p.erasure_rate)
                    << " error=" << format_number(p.error_rate)
                    << " false_accept=" << format_number(p.false_accept_rate) << " trials=" << p.trials << '\n';
            out << "wrote " << sweep_out << '\n';
        } else if (params_cmd->parsed()) {
            const auto params = code.params();
            out << "# " << code.describe() << " far=" << format_number(far) << " noise_var=" << format_number(noise_var)
                << " n_rx=" << n_rx << '\n';
            out << "t=" << params.t() << '\n'
                << "rho=" << params.rho() << '\n'
                << "messages=" << params.message_space() << '\n'
                << "separability_bound=" << separability_bound(params.n(), params.k(), params.order()) << '\n'
                << "default_tau=" << default_tau(params) << '\n'
                << "alpha=" << params.field().alpha().value() << '\n'
                << "threshold=" << format_number(threshold_for_far(far, noise_var, n_rx)) << '\n';
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::IoFailure ? kIo : kUsage;
    }
    return kSuccess;
}

} // namespace sts::cli
