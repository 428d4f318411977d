#include "pdakit/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pdakit/analysis.hpp"
#include "pdakit/combinatorics.hpp"
#include "pdakit/constructions.hpp"
#include "pdakit/delivery.hpp"
#include "pdakit/io.hpp"
#include "pdakit/validate.hpp"

namespace pdakit::cli {

namespace {

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::BadParams:
        case ErrorKind::Infeasible:
        case ErrorKind::NotDivisible:
        case ErrorKind::TooLarge:
        case ErrorKind::UnknownSymbol:
        case ErrorKind::BlockNotFound:
        case ErrorKind::DimensionMismatch:
            return 1;
        case ErrorKind::ParseError:
        case ErrorKind::IoError:
        case ErrorKind::MalformedArray:
            return 2;
        default:
            return 3;  // validation / simulation failures
    }
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "cannot parse rational '" + s + "'");
    }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

void print_verify(std::ostream& out, const PdaArray& p, const ValidationReport& v,
                  bool want_float) {
    out << "c1_ok=" << bool_str(v.c1_ok) << "\n";
    out << "c2_ok=" << bool_str(v.c2_ok) << "\n";
    out << "c3_ok=" << bool_str(v.c3_ok) << "\n";
    out << "c4a_ok=" << bool_str(v.c4a_ok) << "\n";
    out << "c4b_ok=" << bool_str(v.c4b_ok) << "\n";
    out << "valid=" << bool_str(v.ok()) << "\n";
    out << "violations=" << v.violations.size() << "\n";
    for (const auto& viol : v.violations)
        out << "violation=" << viol.condition << " symbol=" << viol.symbol
            << " row=" << viol.row << " col=" << viol.col << "\n";
    out << "G=" << p.G << "\nL=" << p.L << "\nK=" << p.K << "\nF=" << p.F
        << "\nS=" << p.S << "\n";
    if (!v.ok()) return;
    PdaMetrics m = metrics(p);
    out << "Z=" << m.Z << "\n";
    out << "gamma=" << render_rational(m.memory_ratio) << "\n";
    if (want_float) out << "gamma_float=" << static_cast<double>(m.memory_ratio) << "\n";
    out << "sum_dof=" << render_rational(m.sum_dof) << "\n";
    if (want_float) out << "sum_dof_float=" << static_cast<double>(m.sum_dof) << "\n";
    out << "mu=" << m.mu << "\n";
    out << "rho=" << m.rho << "\n";
    out << "dof_upper_bound=" << render_rational(m.dof_upper_bound) << "\n";
    if (want_float)
        out << "dof_upper_bound_float=" << static_cast<double>(m.dof_upper_bound) << "\n";
    out << "optimal=" << bool_str(m.is_optimal) << "\n";
}

std::string trace_stem(const std::string& out_path) {
    auto slash = out_path.find_last_of('/');
    std::string base = slash == std::string::npos ? out_path : out_path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
    f << text;
    if (!f) fail(ErrorKind::IoError, "write failed: " + path);
}

void dump_trace(const HybridTrace& tr, const std::string& dir, const std::string& stem) {
    auto path = [&](const char* suffix) { return dir + "/" + stem + suffix; };
    write_array_file(flatten(tr.B), path(".B"));
    write_array_file(flatten(tr.Q), path(".Q"));
    write_array_file(flatten(tr.X), path(".X"));
    write_array_file(flatten(tr.T), path(".T"));
    write_array_file(flatten(tr.Y), path(".Y"));
    std::ostringstream g;
    for (const auto& [x, y] : tr.graph.edges)
        g << tr.graph.x_labels[x] << '\t' << tr.graph.y_labels[y] << '\n';
    write_text_file(path(".graph"), g.str());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MIMO placement delivery array toolkit"};
    app.require_subcommand(1);

    // construct
    auto* c = app.add_subcommand("construct", "build an array and write it to a file");
    std::string family, out_path, trace_dir;
    int G = 0, L = 0, K = 0, t = 0, K1 = 0, t1 = 0, L1 = 0, m = 0;
    c->add_option("--family", family, "mn|tst|square|group|gtst|hybrid")->required();
    c->add_option("--G", G);
    c->add_option("--L", L);
    c->add_option("--K", K);
    c->add_option("--t", t);
    c->add_option("--K1", K1);
    c->add_option("--t1", t1);
    c->add_option("--L1", L1);
    c->add_option("--m", m);
    std::string base_path;
    c->add_option("--base", base_path, "base array file (family=group)");
    c->add_option("-o,--output", out_path)->required();
    c->add_option("--trace", trace_dir, "directory for hybrid intermediates");

    // verify
    auto* v = app.add_subcommand("verify", "validate an array file and print metrics");
    std::string verify_path;
    bool want_float = false;
    v->add_option("file", verify_path)->required();
    v->add_flag("--float", want_float, "also print decimal renderings");

    // simulate
    auto* s = app.add_subcommand("simulate", "zero-forcing delivery simulation");
    std::string sim_path, dump_path;
    uint64_t seed = 0;
    int trials = 1;
    double tol = 1e-8;
    s->add_option("file", sim_path)->required();
    s->add_option("--seed", seed)->required();
    s->add_option("--trials", trials)->required();
    s->add_option("--tol", tol);
    s->add_option("--dump", dump_path, "CSV of per-packet residuals (first trial)");

    // bound
    auto* b = app.add_subcommand("bound", "sum-DoF upper bound and brute-force check");
    std::string gamma_str;
    b->add_option("--G", G)->required();
    b->add_option("--L", L)->required();
    b->add_option("--K", K)->required();
    b->add_option("--gamma", gamma_str, "memory ratio as P/Q")->required();

    // compare
    auto* cp = app.add_subcommand("compare", "subpacketization sweep to CSV");
    std::string families_str = "tst,hybrid", axis = "t", range_str, baseline = "tst";
    std::string csv_path;
    cp->add_option("--families", families_str, "comma list of tst,hybrid");
    cp->add_option("--axis", axis, "t or gamma (sweep over the per-group t1)");
    cp->add_option("--range", range_str, "a:b[:step] or comma list")->required();
    cp->add_option("--baseline", baseline);
    cp->add_option("--G", G)->required();
    cp->add_option("--L", L)->required();
    cp->add_option("--L1", L1)->required();
    cp->add_option("--K1", K1)->required();
    cp->add_option("-o,--output", csv_path)->required();

    // baranyai
    auto* ba = app.add_subcommand("baranyai", "print a canonical factorization");
    int bv = 0, balpha = 0;
    ba->add_option("--v", bv)->required();
    ba->add_option("--alpha", balpha)->required();

    try {
        std::vector<std::string> argv = args;
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c) {
            PdaArray arr;
            if (family == "mn") {
                arr = mn_pda(K, t);
            } else if (family == "tst") {
                arr = tst(G, L, K, t);
            } else if (family == "square") {
                arr = square_cyclic(G, L, K, t);
            } else if (family == "group") {
                if (base_path.empty())
                    fail(ErrorKind::BadParams, "family=group requires --base FILE");
                arr = group_replicate(read_array_file(base_path), m, L);
            } else if (family == "gtst") {
                arr = group_replicate(tst(G, L1, K1, t1), m, L);
            } else if (family == "hybrid") {
                try {
                    HybridTrace tr = hybrid(G, L, L1, K1, t1);
                    if (!trace_dir.empty()) dump_trace(tr, trace_dir, trace_stem(out_path));
                    arr = tr.P;
                } catch (const HybridError& e) {
                    if (!trace_dir.empty() && e.trace())
                        dump_trace(*e.trace(), trace_dir, trace_stem(out_path));
                    throw;
                }
            } else {
                fail(ErrorKind::ParseError, "unknown family '" + family + "'");
            }
            write_array_file(arr, out_path);
            out << "wrote " << out_path << " (G=" << arr.G << " L=" << arr.L
                << " K=" << arr.K << " F=" << arr.F << " S=" << arr.S << ")\n";
            return 0;
        }
        if (*v) {
            PdaArray arr = read_array_file(verify_path);
            ValidationReport rep = validate(arr);
            print_verify(out, arr, rep, want_float);
            return rep.ok() ? 0 : 3;
        }
        if (*s) {
            PdaArray arr = read_array_file(sim_path);
            std::vector<DumpRow> dump;
            SimReport rep = simulate(arr, seed, trials, tol,
                                     dump_path.empty() ? nullptr : &dump);
            if (!dump_path.empty()) {
                std::ostringstream csv;
                csv << "block,user,packet_row,zf_residual,decode_error\n";
                for (const auto& r : dump)
                    csv << r.block << ',' << r.user << ',' << r.packet_row << ','
                        << r.zf_residual << ',' << r.decode_error << '\n';
                write_text_file(dump_path, csv.str());
            }
            out << "blocks_run=" << rep.blocks_run << "\n";
            out << "trials=" << trials << "\n";
            out << "max_zf_residual=" << rep.max_zf_residual << "\n";
            out << "max_decode_error=" << rep.max_decode_error << "\n";
            out << "min_precoder_rank_ok=" << bool_str(rep.min_precoder_rank_ok) << "\n";
            out << "mean_block_dof=" << render_rational(rep.mean_block_dof) << "\n";
            out << "success=" << bool_str(rep.success) << "\n";
            return rep.success ? 0 : 3;
        }
        if (*b) {
            Rational gamma = parse_rational(gamma_str);
            if (gamma < 0 || gamma > 1) fail(ErrorKind::BadParams, "gamma outside [0,1]");
            BoundInput in{G, L, K, gamma};
            out << "theorem2=" << render_rational(dof_upper_bound(in)) << "\n";
            Rational kt = gamma * K;
            if (boost::multiprecision::denominator(kt) == 1 && kt >= 1 && kt < K) {
                TmmaResult r = tmma_opt(G, L, K, static_cast<int>(
                                                     boost::multiprecision::numerator(kt)));
                out << "lemma1=" << r.best << "/1\n";
                out << "omega=" << r.omega << "\n";
                out << "beta=" << r.beta << "\n";
            } else {
                out << "lemma1=na\n";
            }
            return 0;
        }
        if (*cp) {
            CompareSpec spec;
            spec.G = G;
            spec.L = L;
            spec.L1 = L1;
            spec.K1 = K1;
            spec.baseline = baseline;
            {
                std::istringstream fs(families_str);
                std::string tok;
                while (std::getline(fs, tok, ',')) {
                    if (tok != "tst" && tok != "hybrid")
                        fail(ErrorKind::ParseError, "unknown family '" + tok + "'");
                    spec.families.push_back(tok);
                }
            }
            auto to_t1 = [&](const std::string& tok) -> int {
                if (axis == "t") return std::stoi(tok);
                Rational g = parse_rational(tok) * K1;  // gamma -> t1
                if (boost::multiprecision::denominator(g) != 1)
                    fail(ErrorKind::BadParams, "gamma*K1 must be an integer");
                return static_cast<int>(boost::multiprecision::numerator(g));
            };
            if (range_str.find(':') != std::string::npos) {
                std::istringstream rs(range_str);
                std::string a, b2, st;
                std::getline(rs, a, ':');
                std::getline(rs, b2, ':');
                int step = std::getline(rs, st, ':') ? std::stoi(st) : 1;
                for (int x = std::stoi(a); x <= std::stoi(b2); x += step)
                    spec.t1_values.push_back(x);
            } else {
                std::istringstream rs(range_str);
                std::string tok;
                while (std::getline(rs, tok, ',')) spec.t1_values.push_back(to_t1(tok));
            }
            auto rows = sweep_compare(spec);
            write_text_file(csv_path, compare_csv(rows));
            out << "wrote " << csv_path << " (" << rows.size() << " rows)\n";
            return 0;
        }
        if (*ba) {
            std::vector<int> ground(bv);
            for (int i = 0; i < bv; ++i) ground[i] = i + 1;
            Factorization f = baranyai(ground, balpha);
            out << "# baranyai v=" << bv << " alpha=" << balpha
                << " classes=" << f.num_classes() << "\n";
            for (int d = 0; d < f.num_classes(); ++d) {
                out << "# class " << (d + 1) << ":";
                for (const auto& blk : f.classes[d]) {
                    out << " {";
                    for (size_t i = 0; i < blk.size(); ++i)
                        out << (i ? "," : "") << blk[i];
                    out << "}";
                }
                out << "\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace pdakit::cli
