#include "geodec/fixed_poles.hpp"
#include "geodec/generator.hpp"
#include "geodec/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace geodec;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUnsolvable = 2;

struct TolFlags {
    double rank_rel = 0, eig_match = 0, residual = 0;
    bool has_rank = false, has_eig = false, has_residual = false;

    void attach(CLI::App* app) {
        app->add_option("--tol-rank", rank_rel, "relative rank cutoff")
            ->envname("GEODEC_TOL_RANK")
            ->each([this](const std::string&) { has_rank = true; });
        app->add_option("--tol-eig", eig_match, "eigenvalue matching radius")
            ->envname("GEODEC_TOL_EIG")
            ->each([this](const std::string&) { has_eig = true; });
        app->add_option("--tol-residual", residual, "inclusion/invariance residual bound")
            ->envname("GEODEC_TOL_RESIDUAL")
            ->each([this](const std::string&) { has_residual = true; });
    }

    // flag > file > default
    Tolerances resolve(const std::optional<Tolerances>& from_file) const {
        Tolerances t = from_file.value_or(Tolerances{});
        if (has_rank) t.rank_rel = rank_rel;
        if (has_eig) t.eig_match = eig_match;
        if (has_residual) t.residual = residual;
        t.validate();
        return t;
    }
};

std::string fmt_complex(const Complex& v) {
    std::ostringstream os;
    os.precision(10);
    os << v.real();
    if (std::abs(v.imag()) > 0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
    return os.str();
}

std::string fmt_spectrum(const SpectrumMultiset& s) {
    if (s.empty()) return "{}";
    std::string out = "{";
    bool first = true;
    for (const auto& v : s.sorted()) {
        if (!first) out += ", ";
        first = false;
        out += fmt_complex(v);
    }
    return out + "}";
}

SpectrumMultiset parse_poles(const std::string& text) {
    std::vector<Complex> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        double re = 0, im = 0;
        char tail = 0;
        // forms: "re" or "re{+,-}im i"
        if (std::sscanf(tok.c_str(), "%lf%lf%c", &re, &im, &tail) == 3 &&
            (tail == 'i' || tail == 'j')) {
            vals.emplace_back(re, im);
        } else if (std::sscanf(tok.c_str(), "%lf", &re) == 1) {
            vals.emplace_back(re, 0.0);
        } else {
            throw ParseError("--poles: cannot parse '" + tok + "'");
        }
    }
    SpectrumMultiset s{vals};
    if (!s.is_conjugate_closed()) throw ParseError("--poles: values are not conjugate-closed");
    return s;
}

json tolerances_json(const Tolerances& t) {
    return {{"rank_rel", t.rank_rel}, {"eig_match", t.eig_match}, {"residual", t.residual}};
}

json subspace_json(const Subspace& s) {
    return {{"dim", s.dim()}, {"basis", matrix_to_json(s.basis())}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << dump_canonical(j);
}

int cmd_analyze(const std::string& path, const TolFlags& tf, const std::string& json_out) {
    const PlantFile pf = parse_plant_file(path);
    const Tolerances tol = tf.resolve(pf.tolerances);
    const Plant& plant = pf.plant;

    const Quadruple qz = plant.control_quadruple();
    const Quadruple qw = plant.disturbance_quadruple();
    const Subspace vs = vstar(qz, tol);
    const Subspace ss = sstar(qw, tol);
    const Subspace rs = rstar(qz, tol);
    const Subspace qs = qstar(qw, tol);
    const Subspace vm = build_vm(plant, tol);
    const Subspace sm = build_sm(plant, tol);
    const SpectrumMultiset z1 = invariant_zeros(qz, tol);
    const SpectrumMultiset z2 = invariant_zeros(qw, tol);
    const Solvability sol = solvability(plant, tol);
    const AssumptionChecks chk = assumption_checks(plant, tol);

    std::cout << "plant: n=" << plant.n() << " m=" << plant.m() << " q=" << plant.q()
              << " p=" << plant.p() << " r=" << plant.r() << "\n";
    std::cout << "dim V*_(A,B,E,Dz) = " << vs.dim() << ", dim S*_(A,H,C,Gy) = " << ss.dim()
              << "\n";
    std::cout << "dim R* = " << rs.dim() << ", dim Q* = " << qs.dim() << "\n";
    std::cout << "dim V_m = " << vm.dim() << ", dim S_M = " << sm.dim()
              << ", dim V_m cap S_M = " << intersect(vm, sm, tol).dim() << "\n";
    std::cout << "Z_(A,B,E,Dz) = " << fmt_spectrum(z1) << "\n";
    std::cout << "Z_(A,H,C,Gy) = " << fmt_spectrum(z2) << "\n";
    std::cout << "reachable (A,[B H]): " << (chk.reachable_abh ? "yes" : "no")
              << ", observable ([C;E],A): " << (chk.observable_cea ? "yes" : "no") << "\n";
    std::cout << (sol.solvable ? "solvable" : "UNSOLVABLE") << ": " << sol.diagnosis << "\n";

    if (!json_out.empty()) {
        json j;
        j["tool_version"] = kToolVersion;
        j["tolerances"] = tolerances_json(tol);
        j["dimensions"] = {{"n", plant.n()}, {"m", plant.m()}, {"q", plant.q()},
                           {"p", plant.p()}, {"r", plant.r()}};
        j["v_star"] = subspace_json(vs);
        j["s_star"] = subspace_json(ss);
        j["r_star"] = subspace_json(rs);
        j["q_star"] = subspace_json(qs);
        j["v_m"] = subspace_json(vm);
        j["s_m"] = subspace_json(sm);
        j["zeros_control"] = spectrum_to_json(z1);
        j["zeros_disturbance"] = spectrum_to_json(z2);
        j["assumptions"] = {{"reachable_abh", chk.reachable_abh},
                            {"observable_cea", chk.observable_cea}};
        j["solvable"] = sol.solvable;
        j["diagnosis"] = sol.diagnosis;
        j["condition_residuals"] = {{"i", condition_i_residual(plant, vs, tol)},
                                    {"ii", condition_ii_residual(plant, ss, tol)},
                                    {"iii", vs.containment_residual(ss)}};
        if (sol.witness) j["gain_k"] = matrix_to_json(sol.witness->K);
        write_json(json_out, j);
    }
    return sol.solvable ? kExitOk : kExitUnsolvable;
}

int cmd_fixed_poles(const std::string& path, const TolFlags& tf, const std::string& json_out) {
    const PlantFile pf = parse_plant_file(path);
    const Tolerances tol = tf.resolve(pf.tolerances);
    const Solvability sol = solvability(pf.plant, tol);
    const FixedPoleReport rep = fixed_pole_report(pf.plant, tol);

    std::cout << "sigma_fixed(S*, V*)        = " << fmt_spectrum(rep.sigma_fixed_pair)
              << "\n";
    std::cout << "sigma_fixed(Vm cap SM, Vm) = " << fmt_spectrum(rep.sigma_fixed_vm) << "\n";
    std::cout << "sigma_fixed(SM, SM + Vm)   = " << fmt_spectrum(rep.sigma_fixed_sm) << "\n";
    std::cout << "reachable (A,[B H]): " << (rep.assumptions.reachable_abh ? "yes" : "no")
              << ", observable ([C;E],A): " << (rep.assumptions.observable_cea ? "yes" : "no")
              << "\n";
    if (rep.star) {
        std::cout << "sigma* = " << fmt_spectrum(rep.star->value)
                  << (rep.star->fragile ? "  (fragile)" : "") << "\n";
    } else {
        std::cout << "sigma* undefined (neither assumption holds); bounds:\n";
    }
    std::cout << "sigma_dagger  = " << fmt_spectrum(rep.bounds.dagger) << "\n";
    std::cout << "sigma_ddagger = " << fmt_spectrum(rep.bounds.ddagger) << "\n";

    if (!json_out.empty()) {
        json j;
        j["tool_version"] = kToolVersion;
        j["tolerances"] = tolerances_json(tol);
        j["solvable"] = sol.solvable;
        j["sigma_fixed_supremal"] = spectrum_to_json(rep.sigma_fixed_pair);
        j["sigma_fixed_s"] = spectrum_to_json(rep.sigma_fixed_s);
        j["sigma_fixed_v"] = spectrum_to_json(rep.sigma_fixed_v);
        j["sigma_fixed_vm"] = spectrum_to_json(rep.sigma_fixed_vm);
        j["sigma_fixed_sm"] = spectrum_to_json(rep.sigma_fixed_sm);
        j["assumptions"] = {{"reachable_abh", rep.assumptions.reachable_abh},
                            {"observable_cea", rep.assumptions.observable_cea}};
        if (rep.star) {
            j["sigma_star"] = spectrum_to_json(rep.star->value);
            j["sigma_star_fragile"] = rep.star->fragile;
        }
        j["sigma_dagger"] = spectrum_to_json(rep.bounds.dagger);
        j["sigma_ddagger"] = spectrum_to_json(rep.bounds.ddagger);
        write_json(json_out, j);
    }
    return sol.solvable ? kExitOk : kExitUnsolvable;
}

int cmd_synth(const std::string& path, const std::string& triple_name, const std::string& poles,
              std::uint64_t seed, const TolFlags& tf, const std::string& ctrl_out,
              const std::string& json_out) {
    const PlantFile pf = parse_plant_file(path);
    const Tolerances tol = tf.resolve(pf.tolerances);
    const Plant& plant = pf.plant;
    const std::vector<SolutionTriple> triples = canonical_triples(plant, tol);
    if (triples.empty()) {
        std::cout << "UNSOLVABLE: " << solvability(plant, tol).diagnosis << "\n";
        return kExitUnsolvable;
    }
    std::size_t idx = 0;
    if (triple_name == "supremal") idx = 0;
    else if (triple_name == "vm") idx = 1;
    else if (triple_name == "sm") idx = 2;
    else throw ParseError("--triple must be one of supremal|vm|sm");

    std::optional<SpectrumMultiset> targets;
    if (!poles.empty()) targets = parse_poles(poles);
    else if (pf.target_poles) targets = pf.target_poles;

    const SolutionTriple& triple = triples[idx];
    const Controller ctrl = synthesize(plant, triple, targets, tol, seed);
    const ClosedLoop cl = close_loop(plant, ctrl, tol);
    const VerifyReport ver = verify_decoupled(cl, tol);
    if (!ver.decoupled)
        throw std::runtime_error("synthesized controller failed verification; refusing to emit");
    const SpectrumMultiset spec = closed_loop_spectrum(cl, tol);
    const SpectrumMultiset fixed = fixed_poles_pair(plant, triple.S, triple.V, tol);

    std::cout << "triple " << triple_name << ": dim S = " << triple.S.dim()
              << ", dim V = " << triple.V.dim() << "\n";
    std::cout << "fixed poles       = " << fmt_spectrum(fixed) << "\n";
    std::cout << "closed-loop sigma = " << fmt_spectrum(spec.sharpened(3e-3))
              << "\n";
    std::cout << "markov residual   = " << ver.max_markov_residual << "\n";
    std::cout << "feedthrough resid = " << ver.feedthrough_residual << "\n";
    std::cout << "decoupled: yes\n";

    if (!ctrl_out.empty()) write_json(ctrl_out, controller_to_json(ctrl));
    if (!json_out.empty()) {
        json j;
        j["tool_version"] = kToolVersion;
        j["tolerances"] = tolerances_json(tol);
        j["triple"] = triple_name;
        j["dim_s"] = triple.S.dim();
        j["dim_v"] = triple.V.dim();
        j["gain_k"] = matrix_to_json(triple.K);
        j["fixed_poles"] = spectrum_to_json(fixed);
        j["controller"] = controller_to_json(ctrl);
        j["closed_loop_spectrum"] = spectrum_to_json(spec);
        j["markov_residual"] = ver.max_markov_residual;
        j["feedthrough_residual"] = ver.feedthrough_residual;
        j["decoupled"] = ver.decoupled;
        write_json(json_out, j);
    }
    return kExitOk;
}

int cmd_verify(const std::string& plant_path, const std::string& ctrl_path, const TolFlags& tf,
               const std::string& json_out) {
    const PlantFile pf = parse_plant_file(plant_path);
    const Tolerances tol = tf.resolve(pf.tolerances);
    const Controller ctrl = parse_controller_file(ctrl_path);
    const ClosedLoop cl = close_loop(pf.plant, ctrl, tol);
    const VerifyReport ver = verify_decoupled(cl, tol);
    const SpectrumMultiset spec = closed_loop_spectrum(cl, tol);

    std::cout << "closed-loop sigma = " << fmt_spectrum(spec.sharpened(3e-3))
              << "\n";
    std::cout << "markov residual   = " << ver.max_markov_residual << "\n";
    std::cout << "feedthrough resid = " << ver.feedthrough_residual << "\n";
    std::cout << "decoupled: " << (ver.decoupled ? "yes" : "NO") << "\n";

    if (!json_out.empty()) {
        json j;
        j["tool_version"] = kToolVersion;
        j["tolerances"] = tolerances_json(tol);
        j["closed_loop_spectrum"] = spectrum_to_json(spec);
        j["markov_residual"] = ver.max_markov_residual;
        j["feedthrough_residual"] = ver.feedthrough_residual;
        j["decoupled"] = ver.decoupled;
        write_json(json_out, j);
    }
    return ver.decoupled ? kExitOk : kExitUnsolvable;
}

int cmd_gen(Eigen::Index n, Eigen::Index m, Eigen::Index p, Eigen::Index q, Eigen::Index r,
            std::uint64_t seed, bool solvable, const std::string& out_path) {
    GeneratorOptions opts;
    opts.n = n;
    opts.m = m;
    opts.p = p;
    opts.q = q;
    opts.r = r;
    opts.seed = seed;
    json j;
    if (solvable) {
        const GeneratedPlant gen = random_solvable_plant(opts);
        j = plant_to_json(gen.plant);
    } else {
        j = plant_to_json(random_plant(opts));
    }
    const std::string text = dump_canonical(j);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ParseError("cannot write '" + out_path + "'");
        out << text;
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodec: disturbance decoupling by dynamic output feedback for biproper "
                 "systems"};
    app.require_subcommand(1);

    TolFlags tf;
    std::string plant_path, ctrl_path, json_out, ctrl_out, triple_name = "supremal", poles;
    std::uint64_t seed = 1;

    auto* analyze = app.add_subcommand("analyze", "canonical subspaces, zeros, solvability");
    analyze->add_option("plant", plant_path, "plant file")->required();
    analyze->add_option("--json", json_out, "write machine-readable report");
    tf.attach(analyze);

    auto* fixed = app.add_subcommand("fixed-poles", "fixed-pole multisets, sigma*, bounds");
    fixed->add_option("plant", plant_path, "plant file")->required();
    fixed->add_option("--json", json_out, "write machine-readable report");
    tf.attach(fixed);

    auto* synth = app.add_subcommand("synth", "synthesize and verify a decoupling compensator");
    synth->add_option("plant", plant_path, "plant file")->required();
    synth->add_option("--triple", triple_name, "supremal|vm|sm")->default_val("supremal");
    synth->add_option("--poles", poles, "comma-separated target poles (re or re+imi)");
    synth->add_option("--seed", seed, "placement randomisation seed")->default_val(1);
    synth->add_option("--out", ctrl_out, "write controller matrices");
    synth->add_option("--json", json_out, "write machine-readable report");
    tf.attach(synth);

    auto* verify = app.add_subcommand("verify", "closed-loop assembly and Markov verdict");
    verify->add_option("plant", plant_path, "plant file")->required();
    verify->add_option("controller", ctrl_path, "controller file")->required();
    verify->add_option("--json", json_out, "write machine-readable report");
    tf.attach(verify);

    Eigen::Index gn = 4, gm = 2, gp = 2, gq = 1, gr = 1;
    bool gsolvable = false;
    auto* gen = app.add_subcommand("gen", "generate a random plant file");
    gen->add_option("--n", gn)->default_val(4);
    gen->add_option("--m", gm)->default_val(2);
    gen->add_option("--p", gp)->default_val(2);
    gen->add_option("--q", gq)->default_val(1);
    gen->add_option("--r", gr)->default_val(1);
    gen->add_option("--seed", seed)->default_val(1);
    gen->add_flag("--solvable", gsolvable, "certify solvability by construction");
    gen->add_option("--out", ctrl_out, "output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed()) return cmd_analyze(plant_path, tf, json_out);
        if (fixed->parsed()) return cmd_fixed_poles(plant_path, tf, json_out);
        if (synth->parsed())
            return cmd_synth(plant_path, triple_name, poles, seed, tf, ctrl_out, json_out);
        if (verify->parsed()) return cmd_verify(plant_path, ctrl_path, tf, json_out);
        if (gen->parsed()) return cmd_gen(gn, gm, gp, gq, gr, seed, gsolvable, ctrl_out);
    } catch (const geodec::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
