#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spmul/cluster.hpp"
#include "spmul/expr.hpp"
#include "spmul/parmul.hpp"
#include "spmul/polyfile.hpp"

namespace spmul::cli {

namespace {

struct Options {
    // operands
    std::string a_path, b_path, expr_a, expr_b, vars;
    std::string out_path;
    // multiplication
    std::string merger = "heap";
    std::size_t l = 64;
    std::vector<unsigned> threads;
    std::string coeff = "int";
    std::size_t nodes = 2;
    // bench
    int example_id = 1;
    unsigned scale = 8;
    bool full = false;
    bool count_only = false;
    unsigned reps = 1;
    std::uint64_t verify_limit = 1000000;
    // tune and gen
    std::uint64_t seed = 1;
    std::size_t products = 20;
    std::size_t min_terms = 1000;
    std::size_t max_terms = 5000;
    std::size_t min_vars = 4;
    std::size_t max_vars = 8;
    std::uint32_t max_degree = 20;
    std::vector<std::size_t> l_values{4, 8, 16, 32, 64};
    std::size_t gen_vars = 4;
    std::size_t terms = 100;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

unsigned default_threads() {
    return threads_from_env(std::max(1u, std::thread::hardware_concurrency()));
}

MulConfig make_config(const Options& o, unsigned threads) {
    MulConfig cfg;
    cfg.grid.l = o.l;
    cfg.threads = threads;
    cfg.merger = o.merger == "tree" ? Merger::tree : Merger::heap;
    return cfg;
}

unsigned single_thread_count(const Options& o) {
    if (o.threads.size() > 1)
        throw std::invalid_argument("this command takes a single --threads value");
    return o.threads.empty() ? default_threads() : o.threads.front();
}

std::vector<std::string> split_names(const std::string& list) {
    std::vector<std::string> names;
    std::string cur;
    for (char ch : list) {
        if (ch == ',' || ch == ' ') {
            if (!cur.empty())
                names.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty())
        names.push_back(std::move(cur));
    return names;
}

template <Coefficient C>
struct Operands {
    Polynomial<C> a;
    Polynomial<C> b;
};

// Reads --a/--b files and --expr-a/--expr-b expressions in any combination.
template <Coefficient C>
Operands<C> load_operands(const Options& o, const MulConfig& cfg) {
    if (o.a_path.empty() == o.expr_a.empty() || o.b_path.empty() == o.expr_b.empty())
        throw std::invalid_argument("give exactly one of --a/--expr-a and one of --b/--expr-b");

    std::optional<Polynomial<C>> a, b;
    if (!o.a_path.empty())
        a = read_poly<C>(o.a_path);
    if (!o.b_path.empty())
        b = read_poly<C>(o.b_path);
    if (a && b && a->vars() != b->vars())
        throw std::invalid_argument("operand files declare different variables");

    ContextPtr ctx;
    if (a)
        ctx = a->context_ptr();
    else if (b)
        ctx = b->context_ptr();
    else if (!o.vars.empty())
        ctx = make_context(VarTable(split_names(o.vars)));
    else {
        auto names = scan_identifiers(o.expr_a);
        for (auto& n : scan_identifiers(o.expr_b))
            if (std::find(names.begin(), names.end(), n) == names.end())
                names.push_back(n);
        if (names.empty())
            names.push_back("x");
        ctx = make_context(VarTable(std::move(names)));
    }
    if (!a)
        a = parse_polynomial<C>(o.expr_a, ctx, cfg);
    if (!b)
        b = parse_polynomial<C>(o.expr_b, ctx, cfg);
    return {std::move(*a), std::move(*b)};
}

template <Coefficient C>
void emit_product(const Options& o, const Polynomial<C>& p, std::ostream& out) {
    if (o.out_path.empty())
        out << format_poly(p);
    else
        write_poly(o.out_path, p);
}

template <Coefficient C>
int cmd_mul(const Options& o, std::ostream& out, std::ostream& err) {
    const MulConfig cfg = make_config(o, single_thread_count(o));
    const auto ops = load_operands<C>(o, cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto p = mul(ops.a, ops.b, cfg);
    const double ms = elapsed_ms(start);
    emit_product(o, p, out);
    err << "a_terms=" << ops.a.size() << "\n"
        << "b_terms=" << ops.b.size() << "\n"
        << "result_terms=" << p.size() << "\n"
        << "threads=" << cfg.threads << "\n"
        << "time_ms=" << ms << "\n";
    return exit_ok;
}

template <Coefficient C>
int cmd_cluster(const Options& o, std::ostream& out, std::ostream& err) {
    const MulConfig cfg = make_config(o, single_thread_count(o));
    const auto ops = load_operands<C>(o, cfg);
    InProcessTransport transport(o.nodes);
    ClusterReport report;
    const auto start = std::chrono::steady_clock::now();
    const auto p = cluster_mul(ops.a, ops.b, cfg, o.nodes, transport, &report);
    const double ms = elapsed_ms(start);
    if (!o.out_path.empty())
        write_poly(o.out_path, p);
    out << "nodes=" << o.nodes << "\n"
        << "result_terms=" << p.size() << "\n"
        << "intervals=" << report.op_counts.size() << "\n";
    for (std::size_t r = 0; r < report.ranges.size(); ++r)
        out << "node_" << r << "_range=" << report.ranges[r].first << ".."
            << report.ranges[r].last << "\n"
            << "node_" << r << "_ops=" << report.node_ops[r] << "\n";
    out << "msgs=" << report.messages << "\n"
        << "bytes=" << report.bytes << "\n"
        << "time_ms=" << ms << "\n";
    (void)err;
    return exit_ok;
}

template <Coefficient C>
int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.example_id < 1 || o.example_id > 3)
        throw std::invalid_argument("--example must be 1, 2 or 3");
    if (o.reps == 0)
        throw std::invalid_argument("--reps must be at least 1");
    const unsigned p = o.full ? full_power(o.example_id) : o.scale;
    if (p == 0)
        throw std::invalid_argument("--scale must be at least 1");
    const auto ex = example(o.example_id, p);
    const auto names = [&] {
        auto n = scan_identifiers(ex.f);
        for (auto& v : scan_identifiers(ex.g))
            if (std::find(n.begin(), n.end(), v) == n.end())
                n.push_back(v);
        return n;
    }();
    const auto ctx = make_context(VarTable(names));
    const std::vector<unsigned> thread_list =
        o.threads.empty() ? std::vector<unsigned>{default_threads()} : o.threads;

    MulConfig build_cfg = make_config(o, thread_list.back());
    auto start = std::chrono::steady_clock::now();
    const auto f = parse_polynomial<C>(ex.f, ctx, build_cfg);
    const auto g = parse_polynomial<C>(ex.g, ctx, build_cfg);
    out << "example=" << o.example_id << "\n"
        << "p=" << p << "\n"
        << "a_terms=" << f.size() << "\n"
        << "b_terms=" << g.size() << "\n"
        << "build_ms=" << elapsed_ms(start) << "\n";

    const std::vector<std::string> mergers =
        o.merger == "both" ? std::vector<std::string>{"heap", "tree"} : std::vector<std::string>{o.merger};
    std::optional<Polynomial<C>> first;
    std::uint64_t result_terms = 0;
    for (const auto& m : mergers) {
        for (unsigned c : thread_list) {
            Options run = o;
            run.merger = m;
            const MulConfig cfg = make_config(run, c);
            for (unsigned rep = 0; rep < o.reps; ++rep) {
                start = std::chrono::steady_clock::now();
                if (o.count_only) {
                    result_terms = count_product_terms(f, g, cfg);
                } else {
                    auto prod = mul(f, g, cfg);
                    result_terms = prod.size();
                    if (!first)
                        first = std::move(prod);
                    else if (prod != *first) {
                        err << "error: merger=" << m << " threads=" << c
                            << " produced a different result\n";
                        return exit_mismatch;
                    }
                }
                out << "merger=" << m << " threads=" << c << " rep=" << rep
                    << " time_ms=" << elapsed_ms(start) << "\n";
            }
        }
    }
    out << "result_terms=" << result_terms << "\n";

    const bool small = f.size() * g.size() <= o.verify_limit;
    if (first && small) {
        const bool ok = naive_mul(f, g) == *first;
        out << "verified=" << (ok ? "yes" : "no") << "\n";
        if (!ok) {
            err << "error: product differs from the schoolbook product\n";
            return exit_mismatch;
        }
    } else {
        out << "verified=skipped\n";
    }
    return exit_ok;
}

template <Coefficient C>
int cmd_tune(const Options& o, std::ostream& out, std::ostream&) {
    TuneOptions t;
    t.seed = o.seed;
    t.products = o.products;
    t.min_terms = o.min_terms;
    t.max_terms = o.max_terms;
    t.min_vars = o.min_vars;
    t.max_vars = o.max_vars;
    t.max_degree = o.max_degree;
    t.l_values = o.l_values;
    t.base = make_config(o, single_thread_count(o));
    const auto report = tune_l<C>(t);
    for (std::size_t p = 0; p < report.times_ms.size(); ++p)
        for (std::size_t k = 0; k < report.l_values.size(); ++k)
            out << "product=" << p << " l=" << report.l_values[k]
                << " time_ms=" << report.times_ms[p][k] << "\n";
    for (const auto& [l, count] : report.histogram)
        out << "l=" << l << " within_10pct=" << count << "\n";
    out << "recommended_l=" << report.recommended_l << "\n";
    return exit_ok;
}

template <Coefficient C>
int cmd_gen(const Options& o, std::ostream& out, std::ostream&) {
    const auto ctx = random_context(o.gen_vars, o.max_degree);
    const auto p = random_sparse<C>(ctx, {o.seed, o.terms, o.max_degree});
    emit_product(o, p, out);
    return exit_ok;
}

template <Coefficient C>
int dispatch(const std::string& cmd, const Options& o, std::ostream& out, std::ostream& err) {
    if (cmd == "mul")
        return cmd_mul<C>(o, out, err);
    if (cmd == "cluster")
        return cmd_cluster<C>(o, out, err);
    if (cmd == "bench")
        return cmd_bench<C>(o, out, err);
    if (cmd == "tune")
        return cmd_tune<C>(o, out, err);
    return cmd_gen<C>(o, out, err);
}

void add_operand_flags(CLI::App* sub, Options& o) {
    sub->add_option("--a", o.a_path, "first operand file");
    sub->add_option("--b", o.b_path, "second operand file");
    sub->add_option("--expr-a", o.expr_a, "first operand expression");
    sub->add_option("--expr-b", o.expr_b, "second operand expression");
    sub->add_option("--vars", o.vars, "variable names for expressions, comma separated");
    sub->add_option("--out", o.out_path, "write the product to this file");
}

void add_mul_flags(CLI::App* sub, Options& o, bool allow_both = false) {
    if (allow_both)
        sub->add_option("--merger", o.merger, "heap, tree or both")
            ->check(CLI::IsMember({"heap", "tree", "both"}));
    else
        sub->add_option("--merger", o.merger, "heap or tree")
            ->check(CLI::IsMember({"heap", "tree"}));
    sub->add_option("--l", o.l, "grid density")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "worker count (default: POLYMUL_THREADS or all cores)")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    sub->add_option("--coeff", o.coeff, "coefficient type")->check(CLI::IsMember({"int", "f64"}));
}

} // namespace

Example example(int id, unsigned p) {
    const std::string e = std::to_string(p);
    switch (id) {
    case 1:
        return {"(1+x+y+z+t)^" + e, "(1+x+y+z+t)^" + e + "+1"};
    case 2:
        return {"(1+x+y+2*z^2+3*t^3+5*u^5)^" + e, "(1+u+t+2*z^2+3*y^3+5*x^5)^" + e};
    case 3:
        return {"(1+u^2+v+w^2+x-y^2)^" + e, "(1+u+v^2+w+x^2+y^3)^" + e + "+1"};
    }
    throw std::invalid_argument("unknown example " + std::to_string(id));
}

unsigned full_power(int id) {
    switch (id) {
    case 1:
        return 40;
    case 2:
        return 25;
    case 3:
        return 28;
    }
    throw std::invalid_argument("unknown example " + std::to_string(id));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Sparse polynomial multiplication over exponent intervals", "polymul"};
    app.require_subcommand(1);

    auto* mul_cmd = app.add_subcommand("mul", "multiply two polynomials");
    add_operand_flags(mul_cmd, o);
    add_mul_flags(mul_cmd, o);

    auto* cluster_cmd = app.add_subcommand("cluster", "multiply on simulated cluster nodes");
    add_operand_flags(cluster_cmd, o);
    add_mul_flags(cluster_cmd, o);
    cluster_cmd->add_option("--nodes", o.nodes, "simulated node count")->check(CLI::Range(1, 1024));

    auto* bench_cmd = app.add_subcommand("bench", "time one of the three benchmark examples");
    add_mul_flags(bench_cmd, o, true);
    bench_cmd->add_option("--example", o.example_id, "example 1, 2 or 3");
    bench_cmd->add_option("--scale", o.scale, "power p of the example");
    bench_cmd->add_flag("--full", o.full, "use the full-size powers 40/25/28");
    bench_cmd->add_flag("--count-only", o.count_only,
                        "count result terms interval by interval without keeping the product");
    bench_cmd->add_option("--reps", o.reps, "repetitions per configuration");
    bench_cmd->add_option("--verify-limit", o.verify_limit,
                          "compare with the schoolbook product when na*nb is at most this");

    auto* tune_cmd = app.add_subcommand("tune", "tune the grid density l on random products");
    add_mul_flags(tune_cmd, o);
    tune_cmd->add_option("--seed", o.seed);
    tune_cmd->add_option("--products", o.products);
    tune_cmd->add_option("--min-terms", o.min_terms);
    tune_cmd->add_option("--max-terms", o.max_terms);
    tune_cmd->add_option("--min-vars", o.min_vars);
    tune_cmd->add_option("--max-vars", o.max_vars);
    tune_cmd->add_option("--max-degree", o.max_degree);
    tune_cmd->add_option("--l-values", o.l_values)->delimiter(',');

    auto* gen_cmd = app.add_subcommand("gen", "write a random sparse polynomial");
    gen_cmd->add_option("--vars", o.gen_vars, "number of variables")->check(CLI::Range(1, 14));
    gen_cmd->add_option("--terms", o.terms)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", o.seed);
    gen_cmd->add_option("--max-degree", o.max_degree);
    gen_cmd->add_option("--out", o.out_path);
    gen_cmd->add_option("--coeff", o.coeff)->check(CLI::IsMember({"int", "f64"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? exit_ok : exit_error;
    }

    std::string cmd;
    for (const auto* sub : {mul_cmd, cluster_cmd, bench_cmd, tune_cmd, gen_cmd})
        if (sub->parsed())
            cmd = sub->get_name();

    try {
        return o.coeff == "f64" ? dispatch<double>(cmd, o, out, err)
                                : dispatch<mpz_class>(cmd, o, out, err);
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << "\n";
        return exit_overflow;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}

} // namespace spmul::cli
