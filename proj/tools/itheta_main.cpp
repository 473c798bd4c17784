#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "itheta/cli.hpp"

int main(int argc, char** argv) {
    using itheta::JobSpec;
    JobSpec job;
    CLI::App app{"Indefinite theta series: incidence checks, cone certificates, q-expansions and completions"};
    app.set_version_flag("--version", itheta::kVersion);
    app.require_subcommand(1);

    auto common = [&job](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("input", job.input, "configuration JSON file");
        if (needs_input) in->required();
        sub->add_option("-o,--output", job.output, "write the report here instead of stdout");
        sub->add_option("--format", job.format, "json or text")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--seed", job.seed, "random seed");
    };

    auto* check = app.add_subcommand("check", "exact incidence conditions");
    common(check, true);

    auto* cones = app.add_subcommand("cones", "sign-component atlas and convergence certificate");
    common(cones, true);
    cones->add_option("--tolerance", job.tolerance, "classification dead band and certificate tolerance")
        ->check(CLI::PositiveNumber);

    auto* theta = app.add_subcommand("theta", "truncated q-expansion and its value");
    common(theta, true);
    theta->add_option("-M,--truncation", job.truncation, "largest exponent m (rational)");
    theta->add_option("-B,--bound", job.bound, "majorant bound for enumeration (rational)");
    theta->add_option("--tau-re", job.tau_re, "Re(tau)");
    theta->add_option("--tau-im", job.tau_im, "Im(tau), positive")->check(CLI::PositiveNumber);
    theta->add_option("--mu", job.mu, "coset offset in lattice coordinates, e.g. 0,0,1/2");
    theta->add_option("--reference", job.reference, "negative regular vector fixing the reference weight");
    theta->add_flag("--completed", job.completed, "add the completed partial sum");
    theta->add_option("--e2-tolerance", job.e2_tolerance, "absolute quadrature tolerance")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "constancy, winding and wall audits");
    common(verify, true);
    verify->add_option("--samples", job.samples, "random negative regular vectors")->check(CLI::Range(1, 10000000));

    auto* necessity = app.add_subcommand("necessity", "divergence-witness scan paired with the (I.3) verdict");
    common(necessity, true);
    necessity->add_option("--radius", job.radius, "box radius")->check(CLI::Range(0, 1000));
    necessity->add_option("--mu", job.mu, "coset offset in lattice coordinates");
    necessity->add_option("--reference", job.reference, "negative regular vector fixing the reference weight");

    auto* e2 = app.add_subcommand("e2", "generalized error function for a consecutive pair");
    common(e2, true);
    e2->add_option("--pair", job.pair, "pair (C_j, C_{j+1}), 1-based j")->check(CLI::PositiveNumber);
    e2->add_option("--x", job.x, "point, e.g. 1/2,0,3")->required();
    e2->add_option("--tolerance", job.e2_tolerance, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
    e2->add_flag("--signless", job.signless, "replace the sign product by 1");

    auto* gen = app.add_subcommand("config-gen", "random configuration (optional input supplies the Gram matrix)");
    common(gen, false);
    gen->add_option("-n,--vectors", job.n, "number of vectors")->check(CLI::Range(2, 10000));
    gen->add_option("--mode", job.mode, "planar or perturbed")->check(CLI::IsMember({"planar", "perturbed"}));
    gen->add_option("--winding", job.winding, "planar winding number")->check(CLI::Range(1, 1000));
    gen->add_flag("--non-monotone", job.non_monotone, "random step directions (usually fails (I.3))");
    gen->add_option("--perturbation", job.perturbation, "perturbed mode: coordinate bound (rational)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : itheta::kUsage;
    }
    for (auto* sub : app.get_subcommands()) job.subcommand = sub->get_name();

    const auto result = itheta::run(job);
    if (result.exit_code != itheta::kOk) {
        std::cerr << result.report.dump() << "\n";
        return result.exit_code;
    }
    if (job.output.empty()) {
        std::cout << result.text;
    } else {
        std::ofstream out(job.output, std::ios::binary);
        out << result.text;
        if (!out) {
            std::cerr << R"({"error":{"kind":"io","message":"cannot write )" << job.output << "\"}}\n";
            return itheta::kValidation;
        }
    }
    return 0;
}
