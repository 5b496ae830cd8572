#pragma once

#include "dmflag/ktheory.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace dmflag::cli {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent problem file; where is a JSON-pointer-like location.
struct InputError : std::runtime_error {
    InputError(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where(std::move(where)) {}
    std::string where;
};

struct Object {
    std::string kind;             // dm, flag, complex, koszul, morphism
    DiffModule dm;                // dm, flag, complex and koszul objects
    std::optional<FreeFlag> flag; // flag objects, and complexes folded as flags
    std::string source, target;   // morphisms
    Matrix map;
};

struct Problem {
    RingPtr ring;
    std::map<std::string, Object> objects;
    Json task = Json::object();
};

struct Flags {
    std::optional<std::string> ring_order;
    std::optional<int> length_cap, codim, e, k;
    std::optional<unsigned long long> seed;
};

Problem parse_problem(const Json& doc, const Flags& flags = {});

struct Outcome {
    int exit_code = 0;  // 0 success or holds, 1 verdict fails, 2 input error
    Json report;
};

/// Commands: check homology ce-res anchor quasimin lift perturb adams trc tensor-test frobenius.
Outcome run(const std::string& command, const std::string& text, const Flags& flags = {});

Json to_json(const Matrix& m);
Json to_json(const DiffModule& D);
Json to_json(const FreeFlag& F);
Json to_json(const mpq_class& q);

std::string sha256_hex(const std::string& bytes);

}  // namespace dmflag::cli
