#include "itheta/cli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "itheta/completion.hpp"
#include "itheta/cone_geometry.hpp"
#include "itheta/digest.hpp"
#include "itheta/errors.hpp"
#include "itheta/incidence.hpp"
#include "itheta/signwalk.hpp"
#include "itheta/theta_series.hpp"

namespace itheta {

namespace {

constexpr std::size_t kMaxReportedWitnesses = 5000;

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json signs_json(const std::vector<int>& s) {
    Json out = Json::array();
    for (int v : s) out.push_back(v);
    return out;
}

Json incidence_json(const IncidenceReport& r) {
    Json out = Json::object();
    Json i1 = Json::array(), i2 = Json::array(), i3 = Json::array(), viol = Json::array();
    for (const auto& v : r.i1) i1.push_back({{"j", v.j}, {"norm", rational_json(v.norm)}, {"pass", v.pass}});
    for (const auto& v : r.i2)
        i2.push_back({{"j", v.j},
                      {"norm_product", rational_json(v.norm_product)},
                      {"branch", to_string(v.branch)},
                      {"tested", rational_json(v.tested)},
                      {"pass", v.pass}});
    for (const auto& v : r.i3)
        i3.push_back({{"j", v.j}, {"branch", to_string(v.branch)}, {"tested", rational_json(v.tested)}, {"pass", v.pass}});
    for (const auto& v : r.violations)
        viol.push_back({{"condition", to_string(v.condition)}, {"j", v.j}, {"value", rational_json(v.value)}});
    out["I1"] = i1;
    out["I2"] = i2;
    out["I3"] = i3;
    out["no_three_nulls"] = r.no_three_nulls;
    out["overall"] = r.overall;
    out["violations"] = viol;
    return out;
}

Json component_json(const SignComponent& c) {
    Json out = Json::object();
    out["signs"] = signs_json(c.signs);
    out["w"] = c.w_value;
    out["witness"] = vector_json(c.witness);
    if (c.closure_class) {
        out["class"] = to_string(*c.closure_class);
        out["inf_ratio"] = c.inf_ratio;
        out["exact_class"] = c.exact_class;
        out["class_witness"] = c.exact_class ? vector_json(c.class_witness) : Json(nullptr);
    }
    return out;
}

struct Loaded {
    ConfigFile file;
    std::string digest;
};

Loaded load(const JobSpec& job) {
    if (job.input.empty()) throw ValidationError("an input configuration file is required");
    ConfigFile f = load_config(job.input);
    if (job.mu) {
        VectorR mu = parse_vector(*job.mu);
        f.lattice = Lattice(f.config.space(), f.lattice.basis(), std::move(mu));
    }
    std::string digest = input_digest(f.config, &f.lattice);
    return Loaded{std::move(f), std::move(digest)};
}

// Reference weight: explicit vector, else audited (valid configs) or the ladder witness (invalid ones).
std::pair<ReferenceWeight, std::string> pick_reference(const JobSpec& job, const ConeConfig& config) {
    if (job.reference) return {reference_at(config, parse_vector(*job.reference)), "explicit"};
    if (check_all(config).overall) {
        ReferenceOptions opt;
        opt.seed = job.seed;
        return {reference_weight(config, opt), "audited"};
    }
    ReferenceOptions opt;
    opt.seed = job.seed;
    opt.allow_invalid = true;
    return {reference_weight(config, opt), "ladder (configuration fails (I.3); w is not constant on V<0)"};
}

Json reference_json(const ReferenceWeight& ref, const std::string& source) {
    return {{"w_c", ref.w_c}, {"witness", vector_json(ref.witness)}, {"source", source}, {"audit_samples", ref.audit_samples}};
}

Json run_check(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    return incidence_json(check_all(in.file.config));
}

Json run_cones(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    const auto& config = in.file.config;
    Json out = Json::object();
    CertificateOptions opt;
    opt.tolerance = job.tolerance;
    opt.classify.dead_band = job.tolerance;
    opt.seed = job.seed;
    opt.classify.seed = job.seed;
    opt.enumeration.seed = job.seed;
    if (check_all(config).overall) {
        const auto cert = compute_r_inf(config, opt);
        Json comps = Json::array();
        for (const auto& c : cert.components) comps.push_back(component_json(c));
        out["components"] = comps;
        Json per = Json::array();
        for (std::size_t k = 0; k < cert.vertex_only_cones.size(); ++k)
            per.push_back({{"signs", signs_json(cert.vertex_only_cones[k].signs)}, {"inf_ratio", cert.per_cone_inf[k]}});
        out["certificate"] = {{"r_inf", finite_or_null(cert.r_inf)},
                              {"vertex_only_cones", per},
                              {"tolerance", cert.tolerance},
                              {"method", cert.method},
                              {"enumeration_complete", cert.enumeration_complete},
                              {"partial", cert.partial},
                              {"note", cert.note},
                              {"validation",
                               {{"samples", cert.validation.samples},
                                {"violations", cert.validation.violations},
                                {"min_observed_ratio", finite_or_null(cert.validation.min_observed_ratio)}}}};
    } else {
        auto en = enumerate_components(config, opt.enumeration);
        const auto maj = build_majorant(config.space());
        Json comps = Json::array();
        std::size_t idx = 0;
        for (auto& c : en.components) {
            ClassifyOptions co = opt.classify;
            co.seed = job.seed + idx++;
            classify_component(config, maj, c, co);
            comps.push_back(component_json(c));
        }
        out["components"] = comps;
        out["certificate"] = nullptr;
        out["note"] = "configuration fails (I.1)-(I.3): component atlas only, no convergence certificate";
    }
    return out;
}

Json run_theta(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    const auto& config = in.file.config;
    const std::complex<double> tau(job.tau_re, job.tau_im);
    if (!(job.tau_im > 0)) throw ValidationError("Im(tau) must be positive");
    const Rational truncation = parse_rational(job.truncation);
    if (sgn(truncation) < 0) throw ValidationError("M must be non-negative");

    const auto [ref, source] = pick_reference(job, config);
    ThetaOptions opt;
    opt.reference = ref;
    if (job.bound) opt.bound = parse_rational(*job.bound);
    const auto e = theta_coefficients(config, in.file.lattice, truncation, opt);
    const auto val = theta_evaluate(e, tau);

    Json out = Json::object();
    Json coeffs = Json::array();
    for (const auto& [m, c] : e.coeffs) coeffs.push_back(Json::array({m.get_num().get_si(), m.get_den().get_si(), c}));
    out["coeffs"] = coeffs;
    out["completeness"] = to_string(e.completeness);
    out["value_at_tau"] = complex_json(val.value);
    out["tail_bound"] = val.tail_bound ? Json(*val.tail_bound) : Json(nullptr);
    out["truncation"] = rational_json(e.truncation);
    out["bound"] = rational_json(e.bound);
    out["points"] = e.points;
    out["tau"] = complex_json(tau);
    out["q_convention"] = "q=exp(2*pi*i*tau)";
    out["reference"] = reference_json(ref, source);
    out["r_inf"] = finite_or_null(e.r_inf);
    out["r_support"] = finite_or_null(e.r_support);
    out["origin_term"] = e.origin_term;
    Json vv = Json::array();
    for (const auto& m : e.vanishing_violations) vv.push_back(rational_json(m));
    out["vanishing_violations"] = vv;
    out["warnings"] = e.warnings;
    out["config_digest"] = e.config_digest;

    if (job.completed) {
        if (!check_all(config).overall) throw ValidationError("the completed series needs a configuration satisfying (I.1)-(I.3)");
        double r = std::min(e.r_inf, e.r_support);
        std::string r_source = e.r_inf <= e.r_support ? "r_inf" : "empirical support ratio";
        if (!std::isfinite(r)) {
            r = 1.0;
            r_source = "default 1 (no certificate, empty support)";
        }
        E2Options eo;
        eo.tolerance = job.e2_tolerance;
        const auto ct = completed_theta_partial(config, in.file.lattice, ref, tau, e.bound, r, eo);
        Json shells = Json::array();
        for (const auto& s : ct.shells) shells.push_back(Json::array({rational_json(s.majorant), s.points, s.abs_sum}));
        out["completed"] = {{"value", complex_json(ct.value)},
                            {"value_doubled_bound", complex_json(ct.value_doubled)},
                            {"bound", rational_json(e.bound)},
                            {"tail_estimate", ct.tail_estimate},
                            {"ratio_bound", ct.ratio_bound},
                            {"ratio_source", r_source},
                            {"doubling_ratio", finite_or_null(ct.doubling_ratio)},
                            {"max_quadrature_error", ct.max_quadrature_error},
                            {"e2_tolerance", eo.tolerance},
                            {"measure", "Lebesgue measure in orthonormal frame coordinates of z (centred signless integral = 1)"},
                            {"argument_scaling", "sqrt(2)*x"},
                            {"shells", shells}};
    }
    return out;
}

Json run_verify(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    const auto& config = in.file.config;
    Rng rng(job.seed);
    std::set<int> w_values;
    std::size_t winding_mismatch = 0;
    std::vector<VectorR> pts;
    for (std::size_t k = 0; k < job.samples; ++k) {
        VectorR v = random_negative_regular_vector(config, rng);
        const int w = evaluate_w(config, v);
        w_values.insert(w);
        if (w != static_cast<long>(config.size()) - 4 * winding_count(config, v)) ++winding_mismatch;
        if (pts.size() < 64) pts.push_back(std::move(v));
    }
    Json out = Json::object();
    out["samples"] = job.samples;
    out["w_values"] = Json(std::vector<int>(w_values.begin(), w_values.end()));
    out["constant_on_samples"] = w_values.size() == 1;
    out["winding"] = {{"checked", job.samples}, {"mismatches", winding_mismatch}};

    Json walls = Json::array();
    const std::size_t per_wall = job.samples;
    for (std::size_t j = 0; j < config.size(); ++j) {
        std::size_t exceptions = 0, tested = 0;
        for (std::size_t k = 0; k < per_wall; ++k) {
            const VectorR v = random_negative_wall_vector(config, j, rng);
            const auto s = sign_vector(config, v).signs;
            const std::size_t n = config.size();
            ++tested;
            if (s[(j + n - 1) % n] * s[(j + 1) % n] != -1) ++exceptions;
        }
        walls.push_back({{"j", j + 1}, {"samples", tested}, {"exceptions", exceptions}});
    }
    out["wall_lemma"] = walls;

    std::size_t paths = 0, jumps = 0, skipped = 0, crossings = 0;
    Json first_violation = nullptr;
    for (std::size_t a = 0; a + 1 < pts.size(); a += 2) {
        const std::vector<VectorR> path = {pts[a], pts[a + 1]};
        if (!segment_is_negative(config.space(), pts[a], pts[a + 1])) {
            ++skipped;
            continue;
        }
        const auto rep = path_constancy_check(config, path, 64);
        ++paths;
        crossings += rep.crossings;
        if (rep.status != PathReport::Status::constant) {
            ++jumps;
            if (first_violation.is_null())
                first_violation = {{"status", to_string(rep.status)}, {"message", rep.message},
                                   {"w_before", rep.w_before}, {"w_after", rep.w_after}};
        }
    }
    out["paths"] = {{"audited", paths}, {"skipped_leaving_negative_cone", skipped}, {"crossings", crossings},
                    {"violations", jumps}, {"first_violation", first_violation}};
    out["incidence_overall"] = check_all(config).overall;
    return out;
}

Json run_necessity(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    const auto& config = in.file.config;
    const auto report = check_all(config);
    for (const auto& v : report.violations)
        if (v.condition == Condition::I1 || v.condition == Condition::I2)
            throw ValidationError("necessity analysis requires (I.1) and (I.2); " + to_string(v.condition) +
                                  " fails at j=" + std::to_string(v.j));
    const auto [ref, source] = pick_reference(job, config);
    const auto witnesses = divergence_witness_scan(config, in.file.lattice, job.radius, ref);

    Json fails = Json::array();
    std::string fail_text;
    for (const auto& v : report.violations) {
        if (v.condition != Condition::I3) continue;
        fails.push_back({{"j", v.j}, {"value", rational_json(v.value)}});
        fail_text += (fail_text.empty() ? "" : ", ") + std::string("j=") + std::to_string(v.j);
    }
    const bool i3 = report.overall;
    // Report the shortest witnesses first (sup norm of k, then k).
    std::vector<std::size_t> order(witnesses.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto sup = [&](std::size_t i) {
        long m = 0;
        for (long c : witnesses[i].k) m = std::max(m, std::abs(c));
        return m;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sup(a) < sup(b); });
    Json wl = Json::array();
    for (std::size_t i = 0; i < order.size() && i < kMaxReportedWitnesses; ++i) {
        const auto& w = witnesses[order[i]];
        wl.push_back({{"x", vector_json(w.x)}, {"norm", rational_json(w.norm)}, {"phi", w.phi}});
    }
    const bool agreement = i3 == witnesses.empty();
    Json out = Json::object();
    out["I3_holds"] = i3;
    out["I3_failures"] = fails;
    out["no_three_nulls"] = report.no_three_nulls;
    out["reference"] = reference_json(ref, source);
    out["scan"] = {{"radius", job.radius}, {"witness_count", witnesses.size()},
                   {"truncated", witnesses.size() > kMaxReportedWitnesses}, {"witnesses", wl}};
    out["agreement"] = agreement;
    std::string verdict = i3 ? "(I.3) holds" : "(I.3) fails at " + fail_text;
    verdict += witnesses.empty() ? "; no divergence witness" : "; " + std::to_string(witnesses.size()) + " divergence witnesses";
    verdict += agreement ? "; agreement" : "; DISAGREEMENT";
    if (!agreement && !report.no_three_nulls) verdict += " (three consecutive null vectors: converse not claimed)";
    out["verdict"] = verdict;
    return out;
}

Json run_e2(const JobSpec& job, Json& header) {
    const auto in = load(job);
    header["input_digest"] = in.digest;
    const auto& config = in.file.config;
    if (job.pair < 1 || job.pair > config.size()) throw ValidationError("pair index out of range");
    if (!job.x) throw ValidationError("--x is required");
    const VectorR x = parse_vector(*job.x);
    if (x.size() != config.dim()) throw ValidationError("x has the wrong dimension");
    const long j = static_cast<long>(job.pair) - 1;
    const auto frame = make_frame(config.space(), config.at(j), config.at(j + 1));
    std::vector<double> xd;
    for (const auto& v : x) xd.push_back(v.get_d());
    E2Options eo;
    eo.tolerance = job.e2_tolerance;
    eo.signless = job.signless;
    const auto p = project_to_plane(frame, xd);
    const auto r = e2_at(frame, p, eo);
    const int product = sgn(config.space().inner_product(x, config.at(j))) * sgn(config.space().inner_product(x, config.at(j + 1)));
    Json out = Json::object();
    out["pair"] = job.pair;
    out["x"] = vector_json(x);
    out["projection"] = Json::array({p[0] + 0.0, p[1] + 0.0});  // no negative zeros
    out["value"] = r.value;
    out["error_estimate"] = r.error;
    out["signless"] = job.signless;
    out["angle"] = frame.angle();
    out["centred_closed_form"] = 1 - 2 * frame.angle() / std::numbers::pi;
    out["sign_product"] = product;
    out["tolerance"] = eo.tolerance;
    out["measure"] = "Lebesgue measure in orthonormal frame coordinates of z (centred signless integral = 1)";
    return out;
}

Json run_config_gen(const JobSpec& job) {
    const std::vector<Rational> diag = {Rational(-1), Rational(-1), Rational(1)};
    QuadraticSpace space = job.input.empty() ? QuadraticSpace(MatrixR::diagonal(diag)) : load_config(job.input).config.space();
    GeneratorOptions opt;
    if (job.mode == "planar") opt.mode = GeneratorMode::planar;
    else if (job.mode == "perturbed") opt.mode = GeneratorMode::perturbed;
    else throw ValidationError("--mode must be planar or perturbed");
    opt.winding = job.winding;
    opt.monotone = !job.non_monotone;
    opt.perturbation = parse_rational(job.perturbation);
    return config_json(random_config(space, job.n, opt, job.seed));
}

}  // namespace

RunResult run(const JobSpec& job) {
    RunResult res;
    if (job.format != "json" && job.format != "text") {
        res.exit_code = kValidation;
        res.report = {{"error", {{"kind", "validation"}, {"message", "--format must be json or text"}}}};
        res.text = res.report.dump(2) + "\n";
        return res;
    }
    try {
        if (job.subcommand == "config-gen") {
            res.report = run_config_gen(job);
        } else {
            Json header = Json::object();
            header["tool"] = "itheta";
            header["version"] = kVersion;
            header["subcommand"] = job.subcommand;
            header["input_digest"] = nullptr;
            header["seed"] = job.seed;
            header["tolerance"] = job.tolerance;
            Json result;
            if (job.subcommand == "check") result = run_check(job, header);
            else if (job.subcommand == "cones") result = run_cones(job, header);
            else if (job.subcommand == "theta") result = run_theta(job, header);
            else if (job.subcommand == "verify") result = run_verify(job, header);
            else if (job.subcommand == "necessity") result = run_necessity(job, header);
            else if (job.subcommand == "e2") result = run_e2(job, header);
            else throw ValidationError("unknown subcommand '" + job.subcommand + "'");
            header["result"] = std::move(result);
            res.report = std::move(header);
        }
    } catch (const ValidationError& e) {
        res.exit_code = kValidation;
        res.report = {{"error", {{"kind", "validation"}, {"message", e.what()}}}};
    } catch (const ComputationError& e) {
        res.exit_code = kComputation;
        res.report = {{"error", {{"kind", "computation"}, {"message", e.what()}}}};
    }
    res.text = job.format == "text" ? render_text(res.report) : res.report.dump(2) + "\n";
    return res;
}

namespace {

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array()) {
        std::string s = "(";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + scalar_text(j[i]);
        return s + ")";
    }
    if (j.is_object()) return j.dump();
    return j.dump();
}

bool is_table(const Json& j) {
    if (!j.is_array() || j.empty()) return false;
    for (const auto& e : j)
        if (!e.is_object()) return false;
    return true;
}

void render(const Json& j, const std::string& indent, std::ostringstream& out) {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            out << indent << key << ":\n";
            render(value, indent + "  ", out);
        } else if (is_table(value)) {
            out << indent << key << ":\n";
            std::vector<std::string> cols;
            for (const auto& [k, v] : value.front().items()) cols.push_back(k);
            std::vector<std::vector<std::string>> cells;
            std::vector<std::size_t> width;
            for (const auto& c : cols) width.push_back(c.size());
            for (const auto& rowj : value) {
                std::vector<std::string> r;
                for (std::size_t c = 0; c < cols.size(); ++c) {
                    r.push_back(rowj.contains(cols[c]) ? scalar_text(rowj[cols[c]]) : "");
                    width[c] = std::max(width[c], r.back().size());
                }
                cells.push_back(std::move(r));
            }
            auto line = [&](const std::vector<std::string>& r) {
                out << indent << "  ";
                for (std::size_t c = 0; c < r.size(); ++c) out << r[c] << std::string(width[c] - r[c].size() + 2, ' ');
                out << "\n";
            };
            line(cols);
            for (const auto& r : cells) line(r);
        } else {
            out << indent << key << ": " << scalar_text(value) << "\n";
        }
    }
}

}  // namespace

std::string render_text(const Json& report) {
    std::ostringstream out;
    render(report, "", out);
    return out.str();
}

}  // namespace itheta
