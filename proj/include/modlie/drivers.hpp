#ifndef MODLIE_DRIVERS_HPP
#define MODLIE_DRIVERS_HPP

#include <optional>

#include "modlie/json_io.hpp"

namespace modlie {

inline constexpr const char* kVersion = "modlie 0.1.0";

enum class Status { Pass, Fail, ConditionalPass, InputError };

struct CheckRecord {
    std::string name;
    std::string expected;
    std::string computed;
    bool coset = false;
    bool pass = false;
};

// Verification outcome of one CLI target.  The JSON form is the source of
// truth; the human rendering is a pure function of it.
struct Report {
    std::string target;
    Status status = Status::InputError;
    std::vector<CheckRecord> checks;
    double ms = 0.0;
    std::string version = kVersion;
    std::map<std::string, std::string> input_digests;
    std::vector<std::string> notes;

    void finalize_status(bool conditional = false);
    int exit_code() const;  // 0 pass/conditional-pass, 1 fail, 2 input error
    Json to_json() const;
    static std::string render_text(const Json& j);
};

struct SpecPoint {
    std::optional<std::string> eps, delta, rho;
    bool symbolic = true;

    bool any() const { return eps || delta || rho; }
};

Report run_verify_L3(const SpecPoint& at);
Report run_verify_eq_new(int p, int m, int s);
Report run_verify_k31();
Report run_verify_fixture(const std::string& fixtures_dir, const std::string& name,
                          const std::string& cocycle);
Report run_verify_file(const std::string& path);
Report run_pmap(const std::string& path, const std::string& element, const SpecPoint& at);
Report run_fingerprint(const std::string& path, const SpecPoint& at);
Report run_check_file(const std::string& path);

}  // namespace modlie

#endif
