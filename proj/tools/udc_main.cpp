#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>

#include "udc/cli.hpp"
#include "udc/error.hpp"
#include "udc/mapdsl.hpp"

using namespace udc;

namespace {

int fail(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
}

std::string dir_of(const std::string& path) {
    auto slash = path.rfind('/');
    return slash == std::string::npos ? std::string() : path.substr(0, slash);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        cli::validate_builtins();
    } catch (const std::exception& e) {
        return fail(e);
    }

    CLI::App app{"ultradiscretization and singularity confinement toolkit"};
    app.require_subcommand(1);

    cli::Scenario sc;
    std::string format = "md";

    auto add_common = [&](CLI::App* c) {
        c->add_option("--map", sc.map, "builtin name or map file")->required();
        c->add_option("--steps", sc.steps, "number of steps");
        c->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "markdown", "csv"}));
        c->add_option("--sigma", sc.sigma, "K for qp1/udp1");
        c->add_option("--init", sc.init, "initial values NAME=VALUE,...");
        c->add_option("--A", sc.A, "value of A");
        c->add_option("--Q", sc.Q, "value of Q");
        c->add_option("--T0", sc.T0, "initial T");
    };

    struct Cmd {
        CLI::App* app;
        cli::Analysis analysis;
    };
    std::vector<Cmd> analyses;

    auto* orbit = app.add_subcommand("orbit", "iterate a map (exact, tropical, or lifted)");
    add_common(orbit);
    orbit->add_option("--lift", sc.lift, "lifted values NAME=SERIES,...");
    orbit->add_option("--depth", sc.depth, "window depth");
    analyses.push_back({orbit, cli::Analysis::Orbit});

    auto* cd = app.add_subcommand("confine-discrete", "singularity confinement over Q(eps)");
    add_common(cd);
    cd->add_option("--perturb", sc.perturb, "COORD@VALUE (VALUE may be inf)")->required();
    cd->add_option("--free", sc.free, "COORD or COORD=GRID")->required();
    cd->add_option("--samples", sc.samples, "sample values");
    cd->add_option("--fixed", sc.fixed, "other coordinates and parameters");
    analyses.push_back({cd, cli::Analysis::ConfineDiscrete});

    auto* cu = app.add_subcommand("confine-ultra", "one-sided derivatives of the tropical orbit");
    add_common(cu);
    cu->add_option("--perturb", sc.perturb, "COORD@VALUE")->required();
    cu->add_option("--free", sc.free, "COORD=GRID to sweep another value");
    analyses.push_back({cu, cli::Analysis::ConfineUltra});

    auto* co = app.add_subcommand("correspond", "valuation of the lifted orbit against the tropical orbit");
    add_common(co);
    co->add_option("--lift", sc.lift, "lifted values NAME=SERIES,...");
    co->add_option("--depth", sc.depth, "window depth");
    analyses.push_back({co, cli::Analysis::Correspond});

    auto* l3 = app.add_subcommand("lemma3", "roots and poles against non-differentiable points");
    add_common(l3);
    l3->add_option("--free", sc.free, "free coordinate")->required();
    l3->add_option("--lift", sc.lift, "lifted values NAME=SERIES,...");
    analyses.push_back({l3, cli::Analysis::Lemma3});

    std::string map_src;
    std::optional<long> map_sigma;
    auto* parse = app.add_subcommand("parse", "parse a map and print it back");
    parse->add_option("--map", map_src, "builtin name or map file")->required();
    auto* trop = app.add_subcommand("trop", "print the ultradiscretized map");
    trop->add_option("--map", map_src, "builtin name or map file")->required();
    for (auto* c : {parse, trop}) c->add_option("--sigma", map_sigma, "K for qp1/udp1");

    std::string expr, vars, at, eps = "1/10,1/100,1/1000";
    auto* cl = app.add_subcommand("check-limit", "numeric check of the limit definition");
    cl->add_option("--expr", expr, "subtraction-free expression")->required();
    cl->add_option("--vars", vars, "variable names")->required();
    cl->add_option("--at", at, "tropical values NAME=VALUE,...")->required();
    cl->add_option("--eps", eps, "epsilon values, decreasing");

    std::vector<std::string> files;
    auto* run = app.add_subcommand("run", "run scenario files");
    run->add_option("files", files, "scenario files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& c : analyses) {
            if (!c.app->parsed()) continue;
            sc.analysis = c.analysis;
            sc.format = format == "csv" ? cli::Format::Csv : cli::Format::Markdown;
            std::string out, err;
            int code = cli::run_and_print(sc, out, err);
            std::cout << out;
            std::cerr << err;
            return code;
        }
        if (parse->parsed() || trop->parsed()) {
            if (map_sigma && (map_src == "qp1" || map_src == "udp1")) map_src += "-sigma" + std::to_string(*map_sigma);
            auto lm = cli::load_map(map_src);
            if (parse->parsed())
                std::cout << (lm.rational ? to_string(*lm.rational) : to_string(*lm.tropical));
            else
                std::cout << to_string(lm.as_tropical());
            return 0;
        }
        if (cl->parsed()) {
            Expr e = parse_expr(expr, cli::split_list(vars));
            TropEnv env;
            for (const auto& [k, v] : cli::parse_assignments(at)) env[k] = parse_tropical(v);
            std::vector<Rational> eps_list;
            for (const auto& s : cli::split_list(eps)) eps_list.push_back(parse_rational(s));
            std::cout << "F = " << to_string(ultradiscretize(e)) << " = " << to_string(eval_trop(ultradiscretize(e), env))
                      << "\n| eps | deviation |\n|---|---|\n";
            for (const auto& d : numeric_ud_check(e, env, eps_list)) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6g", d.epsilon);
                std::cout << "| " << buf << " | ";
                if (d.deviation) {
                    std::snprintf(buf, sizeof buf, "%.6g", *d.deviation);
                    std::cout << buf;
                } else {
                    std::cout << d.error;
                }
                std::cout << " |\n";
            }
            return 0;
        }
        if (run->parsed()) {
            int worst = 0;
            for (const auto& f : files) {
                std::ifstream in(f);
                if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read scenario '" + f + "'");
                std::stringstream ss;
                ss << in.rdbuf();
                std::string out, err;
                int code;
                try {
                    code = cli::run_and_print(cli::parse_scenario(ss.str(), dir_of(f)), out, err);
                } catch (const std::exception& e) {
                    err += std::string("error: ") + f + ": " + e.what() + "\n";
                    code = 2;
                }
                std::cout << out;
                std::cerr << err;
                worst = std::max(worst, code);
            }
            return worst;
        }
    } catch (const std::exception& e) {
        return fail(e);
    }
    return 0;
}
