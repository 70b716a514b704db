// modlie: build modular Lie (super)algebras in characteristic p and
// verify their p|2p-structures exactly.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "modlie/drivers.hpp"
#include "modlie/errors.hpp"

using namespace modlie;

namespace {

int emit(const Report& rep, bool as_json) {
    Json j = rep.to_json();
    if (as_json)
        std::cout << j.dump(2) << std::endl;
    else
        std::cout << Report::render_text(j);
    return rep.exit_code();
}

std::string default_fixtures_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("MODLIE_FIXTURES")) return env;
    return "fixtures";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact p|2p-structure toolkit for modular Lie (super)algebras"};
    app.require_subcommand(1);

    bool as_json = false;
    app.add_flag("--json", as_json, "emit the JSON report instead of text");

    // verify <target>
    auto* verify = app.add_subcommand("verify", "run a verification target");
    std::string target;
    verify->add_option("target", target,
                       "L3 | eq-new | k31-jacobi | fixture:<name>:<cocycle> | file:<path>")
        ->required();
    int p = 3, m = 1, s = 1;
    verify->add_option("--p", p, "characteristic (eq-new)");
    verify->add_option("--m", m, "even indeterminates (eq-new)");
    verify->add_option("--s", s, "odd pairs (eq-new)");
    std::string eps, delta, rho;
    verify->add_option("--eps", eps, "specialize eps");
    verify->add_option("--delta", delta, "specialize delta");
    verify->add_option("--rho", rho, "specialize rho");
    bool symbolic = false;
    verify->add_flag("--symbolic", symbolic, "symbolic mode (default for L3)");
    std::string fixtures_flag;
    verify->add_option("--fixtures", fixtures_flag, "fixture directory (or MODLIE_FIXTURES)");

    // pmap <file> <element>
    auto* pmap = app.add_subcommand("pmap", "print x^[p] (x^[2p] for odd x) from an algebra file");
    std::string pmap_file, pmap_element;
    pmap->add_option("file", pmap_file)->required();
    pmap->add_option("element", pmap_element)->required();
    std::string p_eps, p_delta, p_rho;
    pmap->add_option("--eps", p_eps);
    pmap->add_option("--delta", p_delta);
    pmap->add_option("--rho", p_rho);

    // fingerprint <file>
    auto* fingerprint = app.add_subcommand("fingerprint", "invariant fingerprint of an algebra file");
    std::string fp_file;
    fingerprint->add_option("file", fp_file)->required();
    std::string f_eps, f_delta, f_rho;
    fingerprint->add_option("--eps", f_eps);
    fingerprint->add_option("--delta", f_delta);
    fingerprint->add_option("--rho", f_rho);

    // check-file <file>
    auto* check = app.add_subcommand("check-file", "parse an algebra file and check the identities");
    std::string check_file;
    check->add_option("file", check_file)->required();

    CLI11_PARSE(app, argc, argv);

    auto spec_point = [](const std::string& e, const std::string& d, const std::string& r) {
        SpecPoint at;
        if (!e.empty()) at.eps = e;
        if (!d.empty()) at.delta = d;
        if (!r.empty()) at.rho = r;
        return at;
    };

    try {
        if (verify->parsed()) {
            if (target == "L3") return emit(run_verify_L3(spec_point(eps, delta, rho)), as_json);
            if (target == "eq-new") return emit(run_verify_eq_new(p, m, s), as_json);
            if (target == "k31-jacobi") return emit(run_verify_k31(), as_json);
            if (target.rfind("fixture:", 0) == 0) {
                std::string rest = target.substr(8);
                size_t colon = rest.find(':');
                if (colon == std::string::npos) {
                    std::cerr << "fixture target needs fixture:<name>:<cocycle>" << std::endl;
                    return 2;
                }
                return emit(run_verify_fixture(default_fixtures_dir(fixtures_flag),
                                               rest.substr(0, colon), rest.substr(colon + 1)),
                            as_json);
            }
            if (target.rfind("file:", 0) == 0)
                return emit(run_verify_file(target.substr(5)), as_json);
            std::cerr << "unknown verify target: " << target << std::endl;
            return 2;
        }
        if (pmap->parsed())
            return emit(run_pmap(pmap_file, pmap_element, spec_point(p_eps, p_delta, p_rho)),
                        as_json);
        if (fingerprint->parsed())
            return emit(run_fingerprint(fp_file, spec_point(f_eps, f_delta, f_rho)), as_json);
        if (check->parsed()) return emit(run_check_file(check_file), as_json);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const ZeroForInvertible& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
