// qwalk: command-line driver for the quantum-walk spectral invariant pipeline.
//
// Subcommands:
//   gen-gq       generate a classical generalized quadrangle (W(q) or H(3,q^2))
//   linegraph    line intersection graph of an incidence file, as graph6
//   certificate  spectrum certificate of S+(U^k) for a regular graph
//   compare      compare two graphs or certificates; exit 0 cospectral,
//                1 distinguished, 2 error

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/certificate.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/incidence.hpp"
#include "qwalk/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

std::string first_line(const std::string& text) {
    auto pos = text.find('\n');
    return pos == std::string::npos ? text : text.substr(0, pos);
}

struct PipelineFlags {
    std::string primes_spec;
    uint64_t seed = 0;
    int stability = 3;
    int max_trials = 20;
    int krylov_trials = 2000;
    long lb_floor = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--primes", primes_spec,
                        "prime moduli, \"lo:hi\" range or comma-separated list "
                        "(default 1999999000:1999999180)");
        cmd->add_option("--seed", seed, "master seed")->envname("QWALK_SEED");
        cmd->add_option("--stability", stability, "Wiedemann stability window (default 3)");
        cmd->add_option("--max-trials", max_trials, "Wiedemann trial budget (default 20)");
        cmd->add_option("--krylov-trials", krylov_trials, "Krylov projection budget (default 2000)");
        cmd->add_option("--lb-floor", lb_floor, "extra lower bound for unsaturated multiplicities");
    }

    qwalk::RunConfig config() const {
        qwalk::RunConfig cfg = qwalk::RunConfig::defaults();
        if (!primes_spec.empty()) {
            cfg.primes.clear();
            auto colon = primes_spec.find(':');
            if (colon != std::string::npos) {
                uint64_t lo = std::stoull(primes_spec.substr(0, colon));
                uint64_t hi = std::stoull(primes_spec.substr(colon + 1));
                cfg.primes = qwalk::list_primes(lo, hi);
            } else {
                std::istringstream ss(primes_spec);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    cfg.primes.push_back(qwalk::PrimeModulus(std::stoull(tok)));
                std::sort(cfg.primes.begin(), cfg.primes.end());
            }
        }
        cfg.master_seed = seed;
        cfg.stability = stability;
        cfg.max_trials = max_trials;
        cfg.krylov_trials = krylov_trials;
        cfg.lower_bound_floor = lb_floor;
        return cfg;
    }
};

qwalk::SpectrumCertificate load_or_compute(const std::string& path, int k,
                                           const qwalk::RunConfig& cfg) {
    std::string text = read_file(path);
    size_t i = 0;
    while (i < text.size() && isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '{')
        return qwalk::certificate_from_json(nlohmann::json::parse(text));
    qwalk::Graph g = qwalk::parse_graph6(first_line(text));
    return qwalk::compute_certificate(g, k, cfg);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-walk spectral invariant toolkit (S+(U^k) spectra of regular graphs)"};
    app.require_subcommand(1);

    // ---- gen-gq ----
    auto* gen = app.add_subcommand("gen-gq", "generate a classical generalized quadrangle");
    std::string family, gen_out;
    int gen_q = 0;
    bool gen_dual = false;
    gen->add_option("--family", family, "w (symplectic) or h3 (Hermitian)")->required();
    gen->add_option("--q", gen_q, "field parameter")->required();
    gen->add_flag("--dual", gen_dual, "emit the point-line dual");
    gen->add_option("--out", gen_out, "output file (stdout if absent)");

    // ---- linegraph ----
    auto* lg = app.add_subcommand("linegraph", "line intersection graph of an incidence file");
    std::string lg_in, lg_out;
    lg->add_option("--in", lg_in, "incidence file")->required();
    lg->add_option("--out", lg_out, "output graph6 file (stdout if absent)");

    // ---- certificate ----
    auto* ct = app.add_subcommand("certificate", "spectrum certificate of S+(U^k)");
    std::string ct_in, ct_out;
    int ct_k = 3;
    PipelineFlags ct_flags;
    ct->add_option("--in", ct_in, "graph6 file")->required();
    ct->add_option("--k", ct_k, "support power (1, 2 or 3; default 3)");
    ct_flags.attach(ct);
    ct->add_option("--out", ct_out, "output file (stdout if absent)");

    // ---- compare ----
    auto* cp = app.add_subcommand("compare", "compare two graphs or certificates");
    std::string cp_a, cp_b, cp_out;
    int cp_k = 3;
    PipelineFlags cp_flags;
    cp->add_option("--a", cp_a, "graph6 or certificate JSON file")->required();
    cp->add_option("--b", cp_b, "graph6 or certificate JSON file")->required();
    cp->add_option("--k", cp_k, "support power for graph inputs (default 3)");
    cp_flags.attach(cp);
    cp->add_option("--out", cp_out, "verdict JSON file (stdout if absent)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            qwalk::IncidenceStructure inc;
            if (family == "w") inc = qwalk::generate_w(gen_q);
            else if (family == "h3") inc = qwalk::generate_h3(gen_q);
            else throw std::invalid_argument("unsupported family " + family + " (use w or h3)");
            if (gen_dual) inc = qwalk::dual_structure(inc);
            qwalk::GqOrder order = qwalk::check_gq(inc);
            std::cerr << family << "(" << gen_q << (gen_dual ? ", dual" : "") << "): "
                      << inc.num_points << " points, " << inc.lines.size() << " lines, order ("
                      << order.s << "," << order.t << ")\n";
            write_output(gen_out, qwalk::emit_incidence(inc));
        } else if (*lg) {
            qwalk::IncidenceStructure inc = qwalk::parse_incidence(read_file(lg_in));
            qwalk::Graph g = qwalk::line_intersection_graph(inc);
            try {
                qwalk::SrgParams srg = qwalk::validate_srg(g);
                std::cerr << "strongly regular (" << srg.n << "," << srg.k << "," << srg.a << ","
                          << srg.c << ")\n";
            } catch (const std::runtime_error& e) {
                std::cerr << "not strongly regular: " << e.what() << "\n";
            }
            write_output(lg_out, qwalk::emit_graph6(g) + "\n");
        } else if (*ct) {
            qwalk::Graph g = qwalk::parse_graph6(first_line(read_file(ct_in)));
            qwalk::SpectrumCertificate cert = qwalk::compute_certificate(g, ct_k, ct_flags.config());
            write_output(ct_out, qwalk::certificate_to_string(cert));
        } else if (*cp) {
            qwalk::RunConfig cfg = cp_flags.config();
            qwalk::SpectrumCertificate a = load_or_compute(cp_a, cp_k, cfg);
            qwalk::SpectrumCertificate b = load_or_compute(cp_b, cp_k, cfg);
            qwalk::CompareVerdict v = qwalk::compare_certificates(a, b);
            nlohmann::json j;
            j["verdict"] = v.cospectral ? "COSPECTRAL" : "DISTINGUISHED";
            j["detail"] = v.detail;
            j["k"] = a.k;
            j["a"] = {{"graph_hash", a.graph_hash}, {"dim", a.dim}};
            j["b"] = {{"graph_hash", b.graph_hash}, {"dim", b.dim}};
            write_output(cp_out, j.dump(2) + "\n");
            return v.cospectral ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
