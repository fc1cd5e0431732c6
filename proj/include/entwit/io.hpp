#ifndef ENTWIT_IO_HPP
#define ENTWIT_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entwit/bsa.hpp"
#include "entwit/ces.hpp"
#include "entwit/order.hpp"

namespace entwit {

inline constexpr const char* kVersion = "0.1.0";

/// Operator document: {"dims": [d1, d2, ...], "matrix": [[[re, im], ...], ...]}
/// with row-major rows and every entry an explicit [re, im] pair.
nlohmann::json operator_to_json(const HermitianOperator& op);
HermitianOperator operator_from_json(const nlohmann::json& doc);
HermitianOperator load_operator_file(const std::string& path);

std::string read_file(const std::string& path);  // ParseError when unreadable
std::string fnv1a64_hex(const std::string& bytes);

struct CliFlags {
    std::uint64_t seed = 0;
    /// Unset means the per-command default (64 for classify/finer, 128 for
    /// the subtraction searches, 256 for ces).
    std::optional<int> restarts;
    double tol = 1e-6;
    int max_iters = 10000;
};

struct CmdResult {
    nlohmann::json report;
    int exit_code = 0;
};

CmdResult cmd_classify(const std::string& path, const CliFlags& flags);
CmdResult cmd_bsa(const std::string& path, const CliFlags& flags);
CmdResult cmd_finer(const std::string& path1, const std::string& path2, const CliFlags& flags);
CmdResult cmd_family(const std::string& path1, const std::string& path2, const CliFlags& flags);
CmdResult cmd_ces(const std::vector<int>& dims, const CliFlags& flags);
/// Single p when given, otherwise a uniform grid over [0, 1].
CmdResult cmd_demo_werner(std::optional<double> p, int grid, const CliFlags& flags);

/// Error taxonomy to exit codes: parse 2, validation 3, precondition 5,
/// anything else 1. Not-converged (4) is set by cmd_bsa directly.
int exit_code_for(const std::exception& e);

}  // namespace entwit

#endif
