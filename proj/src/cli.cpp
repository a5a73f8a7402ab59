#include "nbqi/cli.hpp"

#include "nbqi/applications.hpp"
#include "nbqi/errors.hpp"
#include "nbqi/io.hpp"
#include "nbqi/nearbest.hpp"
#include "nbqi/quasi_interp.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

namespace nbqi::cli {

namespace {

std::string format_sizes(const std::vector<int>& sizes)
{
    std::string out;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (k > 0) {
            out += ',';
        }
        out += std::to_string(sizes[k]);
    }
    return out;
}

std::vector<int> parse_sizes(const std::string& text)
{
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            sizes.push_back(static_cast<int>(io::parse_int(item)));
        }
    }
    return sizes;
}

bool parse_bool(const std::string& text)
{
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw std::invalid_argument("expected true or false, got '" + text + "'");
}

const std::vector<std::string>& commands()
{
    static const std::vector<std::string> names{"norms", "nearbest", "convergence", "quad", "diffmat", "audit"};
    return names;
}

// A result table. Cells keep their type so JSON output mirrors the CSV.
using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return io::format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

nlohmann::json cell_json(const Cell& cell)
{
    return std::visit([](const auto& v) { return nlohmann::json(v); }, cell);
}

void emit(const Table& table, const nlohmann::json& summary, Format format, std::ostream& out)
{
    if (format == Format::csv) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << table.columns[c];
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << cell_text(row[c]);
            }
            out << '\n';
        }
        return;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            obj[table.columns[c]] = cell_json(row[c]);
        }
        rows.push_back(std::move(obj));
    }
    nlohmann::json doc = {{"rows", std::move(rows)}};
    if (!summary.is_null()) {
        doc["summary"] = summary;
    }
    out << doc.dump() << '\n';
}

// Provenance columns carried by every row.
std::vector<std::string> provenance_columns()
{
    return {"command", "kind", "family", "a", "b", "ratio", "seed", "m", "p", "q"};
}

std::vector<Cell> provenance(const RunConfig& c, const PartitionSpec& spec, const std::string& kind)
{
    return {c.command, kind, to_string(spec.family), spec.a, spec.b, spec.ratio,
            static_cast<long long>(spec.seed), static_cast<long long>(c.m), static_cast<long long>(c.effective_p()),
            static_cast<long long>(c.q)};
}

QuasiInterpolant build_operator(const RunConfig& c, const SpaceRef& space)
{
    switch (qi_kind_from_string(c.kind)) {
    case QiKind::q2star: return build_q2star(space);
    case QiKind::qp2star: return build_qp2star(space, c.effective_p());
    case QiKind::nearbest: return build_nearbest_qi(space, c.effective_p(), c.q).qi;
    case QiKind::dqi: break;
    }
    throw std::invalid_argument("kind '" + c.kind + "' has no discrete stencils");
}

std::vector<PartitionSpec> partitions(const RunConfig& c)
{
    if (c.trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    std::vector<PartitionSpec> specs;
    for (int t = 0; t < c.trials; ++t) {
        PartitionSpec spec = c.partition;
        spec.seed = c.partition.seed + static_cast<std::uint64_t>(t);
        specs.push_back(spec);
    }
    return specs;
}

int run_norms(const RunConfig& c, std::ostream& out)
{
    const auto kind = qi_kind_from_string(c.kind);
    Table table;
    table.columns = provenance_columns();
    for (const char* col : {"n", "nu1", "nu1_boundary", "bound", "ok"}) {
        table.columns.emplace_back(col);
    }
    bool all_ok = true;
    const double bound = theoretical_bound(kind, c.m);
    for (const auto& spec : partitions(c)) {
        const auto space = make_space(generate_partition(spec, c.m));
        double nu1 = 0.0;
        double nu1_boundary = 0.0;
        if (kind == QiKind::nearbest) {
            const auto nb = build_nearbest_qi(space, c.effective_p(), c.q);
            nu1 = nb.nu1_star;
            nu1_boundary = nb.boundary_nu1;
        } else {
            const auto qi = build_operator(c, space);
            nu1 = interior_norm_upper_bound(qi);
            nu1_boundary = boundary_norm_upper_bound(qi);
        }
        const bool ok = nu1 <= bound + 1e-12;
        all_ok = all_ok && ok;
        auto row = provenance(c, spec, c.kind);
        row.insert(row.end(), {static_cast<long long>(spec.n), nu1, nu1_boundary, bound, ok});
        table.rows.push_back(std::move(row));
    }
    emit(table, {{"all_ok", all_ok}}, c.format, out);
    return exit_ok;
}

int run_nearbest(const RunConfig& c, std::ostream& out)
{
    const int p = c.effective_p();
    Table table;
    table.columns = provenance_columns();
    for (const char* col : {"n", "nu1_star", "nu1_boundary", "closed_form_nu1", "bound", "knot_condition_all",
                            "certified_all", "max_gap"}) {
        table.columns.emplace_back(col);
    }
    const bool audit = c.audit || c.command == "audit";
    for (const auto& spec : partitions(c)) {
        const auto space = make_space(generate_partition(spec, c.m));
        const auto nb = build_nearbest_qi(space, p, c.q);
        double closed = 1.0;
        double max_gap = 0.0;
        bool condition_all = true;
        bool certified_all = true;
        for (const auto& rep : nb.reports) {
            if (audit) {
                auto rec = audit_record(rep);
                rec["m"] = c.m;
                rec["p"] = p;
                rec["q"] = c.q;
                rec["family"] = to_string(spec.family);
                rec["seed"] = spec.seed;
                out << rec.dump() << '\n';
            }
            if (rep.boundary || !rep.closed_form_value) {
                continue;
            }
            closed = std::max(closed, *rep.closed_form_value);
            max_gap = std::max(max_gap, *rep.closed_form_value - rep.solution.value);
            condition_all = condition_all && rep.knot_condition.value_or(false);
            certified_all = certified_all && rep.certificate && rep.certificate->certified;
        }
        const double bound = c.m >= 2 ? theoretical_bound(QiKind::nearbest, c.m) : std::nan("");
        auto row = provenance(c, spec, "nearbest");
        row.insert(row.end(), {static_cast<long long>(spec.n), nb.nu1_star, nb.boundary_nu1, closed, bound,
                               condition_all, certified_all, max_gap});
        if (audit) {
            nlohmann::json summary = nlohmann::json::object();
            for (std::size_t k = 0; k < row.size(); ++k) {
                summary[table.columns[k]] = cell_json(row[k]);
            }
            summary["record"] = "summary";
            out << summary.dump() << '\n';
        } else {
            table.rows.push_back(std::move(row));
        }
    }
    if (!audit) {
        emit(table, nullptr, c.format, out);
    }
    return exit_ok;
}

int emit_convergence(const RunConfig& c, const ConvergenceReport& report, std::ostream& out)
{
    Table table;
    table.columns = provenance_columns();
    for (const char* col : {"f", "n", "h_max", "error", "order_running", "fitted_order"}) {
        table.columns.emplace_back(col);
    }
    for (const auto& r : report.rows) {
        PartitionSpec spec = c.partition;
        spec.n = r.n;
        auto row = provenance(c, spec, c.kind);
        row.insert(row.end(), {c.function, static_cast<long long>(r.n), r.h_max, r.error, r.order_running,
                               report.fitted_order});
        table.rows.push_back(std::move(row));
    }
    emit(table, {{"fitted_order", report.fitted_order}}, c.format, out);
    return exit_ok;
}

std::vector<int> ladder(const RunConfig& c)
{
    if (!c.sizes.empty()) {
        return c.sizes;
    }
    return {16, 32, 64, 128};
}

int run_convergence(const RunConfig& c, std::ostream& out)
{
    const auto f = builtin_function(c.function);
    const auto sizes = ladder(c);
    const auto report =
        convergence_study(make_recipe(qi_kind_from_string(c.kind), c.effective_p(), c.q), f, sizes, c.partition, c.m);
    return emit_convergence(c, report, out);
}

int run_quad(const RunConfig& c, std::ostream& out)
{
    const auto f = builtin_function(c.function);
    Table table;
    table.columns = provenance_columns();
    for (const char* col : {"n", "f", "exact", "approx", "error", "weight_sum", "exactness"}) {
        table.columns.emplace_back(col);
    }
    for (const auto& spec : partitions(c)) {
        const auto space = make_space(generate_partition(spec, c.m));
        const auto rule = quadrature_from_qi(build_operator(c, space));
        const double exact = f.integral(spec.a, spec.b);
        const double approx = rule.integrate(f.value);
        double wsum = 0.0;
        for (double w : rule.weights) {
            wsum += w;
        }
        auto row = provenance(c, spec, c.kind);
        row.insert(row.end(), {static_cast<long long>(spec.n), c.function, exact, approx, approx - exact, wsum,
                               static_cast<long long>(rule.exactness)});
        table.rows.push_back(std::move(row));
    }
    emit(table, nullptr, c.format, out);
    return exit_ok;
}

int run_diffmat(const RunConfig& c, std::ostream& out)
{
    const auto builder = [&c](const SpaceRef& space) { return build_operator(c, space); };
    if (!c.sizes.empty()) {
        const auto f = builtin_function(c.function);
        const auto report = differentiation_study(builder, f, c.sizes, c.partition, c.m);
        return emit_convergence(c, report, out);
    }
    const auto space = make_space(generate_partition(c.partition, c.m));
    const auto d = differentiation_matrix(builder(space));
    Table table;
    table.columns = provenance_columns();
    for (const char* col : {"n", "i", "j", "value", "interior_row"}) {
        table.columns.emplace_back(col);
    }
    for (int i = 0; i < d.size; ++i) {
        for (int j = 0; j < d.size; ++j) {
            if (d.at(i, j) == 0.0) {
                continue;
            }
            auto row = provenance(c, c.partition, c.kind);
            row.insert(row.end(), {static_cast<long long>(c.partition.n), static_cast<long long>(i),
                                   static_cast<long long>(j), d.at(i, j),
                                   static_cast<bool>(d.interior_rows[static_cast<std::size_t>(i)])});
            table.rows.push_back(std::move(row));
        }
    }
    emit(table, {{"bandwidth", d.bandwidth}}, c.format, out);
    return exit_ok;
}

} // namespace

std::map<std::string, std::string> RunConfig::to_record() const
{
    auto record = partition.to_record();
    record["command"] = command;
    record["m"] = std::to_string(m);
    record["p"] = std::to_string(p);
    record["q"] = std::to_string(q);
    record["kind"] = kind;
    record["f"] = function;
    record["sizes"] = format_sizes(sizes);
    record["trials"] = std::to_string(trials);
    record["audit"] = audit ? "true" : "false";
    record["format"] = format == Format::csv ? "csv" : "json";
    record["out"] = out;
    return record;
}

std::string RunConfig::canonical() const
{
    return io::format_key_values(to_record());
}

void RunConfig::apply_record(RunConfig& config, const std::map<std::string, std::string>& record)
{
    std::map<std::string, std::string> partition_keys;
    for (const auto& [key, value] : record) {
        if (key == "family" || key == "a" || key == "b" || key == "n" || key == "ratio" || key == "seed") {
            partition_keys[key] = value;
        } else if (key == "command") {
            if (std::find(commands().begin(), commands().end(), value) == commands().end()) {
                throw std::invalid_argument("unknown command '" + value + "'");
            }
            config.command = value;
        } else if (key == "m") {
            config.m = static_cast<int>(io::parse_int(value));
        } else if (key == "p") {
            config.p = static_cast<int>(io::parse_int(value));
        } else if (key == "q") {
            config.q = static_cast<int>(io::parse_int(value));
        } else if (key == "kind") {
            (void)qi_kind_from_string(value);
            config.kind = value;
        } else if (key == "f") {
            config.function = value;
        } else if (key == "sizes") {
            config.sizes = parse_sizes(value);
        } else if (key == "trials") {
            config.trials = static_cast<int>(io::parse_int(value));
        } else if (key == "audit") {
            config.audit = parse_bool(value);
        } else if (key == "format") {
            if (value != "csv" && value != "json") {
                throw std::invalid_argument("format must be csv or json");
            }
            config.format = value == "csv" ? Format::csv : Format::json;
        } else if (key == "out") {
            config.out = value;
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    if (!partition_keys.empty()) {
        auto merged = config.partition.to_record();
        for (const auto& [key, value] : partition_keys) {
            merged[key] = value;
        }
        config.partition = PartitionSpec::from_record(merged);
    }
}

RunConfig RunConfig::from_record(const std::map<std::string, std::string>& record)
{
    RunConfig config;
    apply_record(config, record);
    return config;
}

std::optional<RunConfig> parse_command_line(const std::vector<std::string>& args, std::ostream& help_out)
{
    CLI::App app{"Spline discrete quasi-interpolants: norms, near-best weights, convergence, quadrature, "
                 "differentiation"};
    app.name("nbqi");

    std::string command;
    app.add_option("command", command, "norms | nearbest | convergence | quad | diffmat | audit")->required();
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file; flags override its entries");

    // Flags map one-to-one onto record keys.
    std::map<std::string, std::string> flags;
    const std::vector<std::pair<std::string, std::string>> value_flags{
        {"kind", "operator: dqi | q2star | qp2star | nearbest"},
        {"m", "spline degree"},
        {"p", "stencil half-width (default m)"},
        {"q", "exactness degree for nearbest (default 2)"},
        {"family", "partition: uniform | arithmetic | geometric | random"},
        {"n", "number of knot spans"},
        {"a", "left end"},
        {"b", "right end"},
        {"ratio", "geometric ratio / arithmetic increment"},
        {"seed", "seed for random partitions"},
        {"f", "test function: sin | exp | runge"},
        {"sizes", "comma-separated ladder of n"},
        {"trials", "number of consecutive seeds"},
        {"format", "csv | json"},
        {"out", "output path (default stdout)"},
    };
    for (const auto& [name, help] : value_flags) {
        app.add_option_function<std::string>("--" + name, [&flags, key = name](const std::string& v) { flags[key] = v; },
                                             help);
    }
    bool audit = false;
    auto* audit_flag = app.add_flag("--audit", audit, "emit the per-index JSON-lines audit stream");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    try {
        RunConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw std::invalid_argument("cannot read config file '" + config_path + "'");
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            RunConfig::apply_record(config, io::parse_key_values(buffer.str()));
        }
        flags["command"] = command;
        if (audit_flag->count() > 0) {
            flags["audit"] = audit ? "true" : "false";
        }
        RunConfig::apply_record(config, flags);
        return config;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        if (config.m < 1) {
            throw std::invalid_argument("m must be >= 1");
        }
        if (config.command == "norms") return run_norms(config, out);
        if (config.command == "nearbest" || config.command == "audit") return run_nearbest(config, out);
        if (config.command == "convergence") return run_convergence(config, out);
        if (config.command == "quad") return run_quad(config, out);
        if (config.command == "diffmat") return run_diffmat(config, out);
        throw std::invalid_argument("unknown command '" + config.command + "'");
    } catch (const NumericalError& e) {
        err << "nbqi: numerical failure at " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "nbqi: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range& e) {
        err << "nbqi: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "nbqi: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::optional<RunConfig> config;
    try {
        config = parse_command_line(args, out);
    } catch (const UsageError& e) {
        err << "nbqi: " << e.what() << '\n';
        return exit_usage;
    }
    if (!config) {
        return exit_ok;
    }
    if (config->out.empty()) {
        return run(*config, out, err);
    }
    std::ofstream file(config->out);
    if (!file) {
        err << "nbqi: cannot open output '" << config->out << "'\n";
        return exit_usage;
    }
    return run(*config, file, err);
}

} // namespace nbqi::cli
