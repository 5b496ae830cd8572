#include "cli.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <random>
#include <sstream>

namespace dmflag::cli {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw InputError(where, what); }

const Json& need(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing field '") + key + "'");
    return j.at(key);
}

int as_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) bad(where, "expected an integer");
    return j.get<int>();
}

std::vector<int> int_list(const Json& j, const std::string& where) {
    if (!j.is_array()) bad(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_int(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

Matrix matrix_of(const RingPtr& R, const Json& j, const std::string& where, int rows, int cols) {
    if (!j.is_array()) bad(where, "expected an array of rows");
    if (static_cast<int>(j.size()) != rows) bad(where, "expected " + std::to_string(rows) + " rows");
    Matrix m(R, rows, cols);
    for (int r = 0; r < rows; ++r) {
        const std::string row_at = where + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
            bad(row_at, "expected " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            const std::string at = row_at + "[" + std::to_string(c) + "]";
            const Json& e = j[r][c];
            std::string text;
            if (e.is_string())
                text = e.get<std::string>();
            else if (e.is_number_integer())
                text = std::to_string(e.get<long long>());
            else
                bad(at, "expected a polynomial string");
            try {
                m.at(r, c) = Poly::parse(R, text);
            } catch (const RingError& err) {
                bad(at, err.what());
            }
        }
    }
    return m;
}

RingPtr parse_ring(const Json& j, const Flags& flags) {
    const std::string where = "ring";
    const Json& field = need(j, "field", where);
    std::optional<Field> F;
    try {
        if (field.is_string() && (field == "QQ" || field == "Q"))
            F = Field::rationals();
        else if (field.is_number_integer() && field.get<long long>() > 0)
            F = Field::prime(static_cast<std::uint32_t>(field.get<long long>()));
        else
            bad(where + ".field", "expected \"QQ\" or a prime");
    } catch (const RingError& err) {
        bad(where + ".field", err.what());
    }
    std::vector<std::string> names;
    if (j.contains("variables")) {
        const Json& v = j.at("variables");
        if (!v.is_array()) bad(where + ".variables", "expected an array of names");
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!v[k].is_string()) bad(where + ".variables[" + std::to_string(k) + "]", "expected a name");
            names.push_back(v[k].get<std::string>());
        }
    }
    std::string order = j.value("order", std::string("grevlex"));
    if (flags.ring_order) order = *flags.ring_order;
    MonoOrder mo;
    if (order == "grevlex")
        mo = MonoOrder::grevlex;
    else if (order == "lex")
        mo = MonoOrder::lex;
    else
        bad(where + ".order", "unknown monomial order '" + order + "'");
    try {
        return make_ring(*F, static_cast<int>(names.size()), mo, names);
    } catch (const RingError& err) {
        bad(where, err.what());
    }
}

DiffModule dm_of(const RingPtr& R, const Json& j, const std::string& where) {
    int modulus = as_int(need(j, "modulus", where), where + ".modulus");
    std::vector<int> degree = int_list(need(j, "degree", where), where + ".degree");
    const int n = static_cast<int>(degree.size());
    Matrix diff = matrix_of(R, need(j, "diff", where), where + ".diff", n, n);
    std::vector<int> weight;
    if (j.contains("weight")) {
        weight = int_list(j.at("weight"), where + ".weight");
        if (static_cast<int>(weight.size()) != n) bad(where + ".weight", "length differs from degree");
    }
    int shift = j.contains("shift") ? as_int(j.at("shift"), where + ".shift") : 0;
    if (modulus < 0) bad(where + ".modulus", "must be nonnegative");
    try {
        DiffModule D(modulus, degree, diff, weight, shift);
        D.graded = j.value("graded", false);
        return D;
    } catch (const RingError& err) {
        bad(where, err.what());
    }
}

ChainComplex complex_of(const RingPtr& R, const Json& j, const std::string& where) {
    int lo = j.contains("lo") ? as_int(j.at("lo"), where + ".lo") : 0;
    const Json& w = need(j, "weights", where);
    if (!w.is_array()) bad(where + ".weights", "expected one weight list per degree");
    std::vector<std::vector<int>> weights;
    for (std::size_t k = 0; k < w.size(); ++k)
        weights.push_back(int_list(w[k], where + ".weights[" + std::to_string(k) + "]"));
    ChainComplex C(R, lo, weights);
    if (j.contains("d")) {
        const Json& d = j.at("d");
        if (!d.is_object()) bad(where + ".d", "expected an object keyed by degree");
        for (const auto& [key, m] : d.items()) {
            const std::string at = where + ".d." + key;
            int i = 0;
            try {
                i = std::stoi(key);
            } catch (const std::exception&) {
                bad(at, "key is not a degree");
            }
            if (i <= C.lo() || i > C.hi()) bad(at, "degree outside the support");
            C.set_d(i, matrix_of(R, m, at, C.rank(i - 1), C.rank(i)));
        }
    }
    if (!C.squares_to_zero()) bad(where + ".d", "d^2 != 0");
    return C;
}

void fill_from_complex(Object& o, const ChainComplex& C, const Json& j, const std::string& where, int default_fold) {
    int d = j.contains("fold") ? as_int(j.at("fold"), where + ".fold") : default_fold;
    if (d < 0) bad(where + ".fold", "must be nonnegative");
    try {
        if (C.lo() >= 0) {
            o.flag = flag_from_complex(C, d);
            o.dm = o.flag->dm;
        } else {
            o.dm = fold(C, d);
        }
    } catch (const std::exception& err) {
        bad(where, err.what());
    }
}

Object object_of(const RingPtr& R, const Json& j, const std::string& where,
                 const std::map<std::string, Object>& known) {
    Object o;
    o.kind = need(j, "kind", where).is_string() ? j.at("kind").get<std::string>() : "";
    if (o.kind == "dm") {
        o.dm = dm_of(R, j, where);
    } else if (o.kind == "flag") {
        o.dm = dm_of(R, j, where);
        std::vector<int> level = int_list(need(j, "level", where), where + ".level");
        if (level.size() != o.dm.degree.size()) bad(where + ".level", "length differs from degree");
        o.flag = FreeFlag{o.dm, level};
    } else if (o.kind == "complex") {
        fill_from_complex(o, complex_of(R, j, where), j, where, 0);
    } else if (o.kind == "koszul") {
        const Json& el = need(j, "elements", where);
        if (!el.is_array()) bad(where + ".elements", "expected an array of polynomials");
        std::vector<Poly> xs;
        for (std::size_t k = 0; k < el.size(); ++k) {
            const std::string at = where + ".elements[" + std::to_string(k) + "]";
            if (!el[k].is_string()) bad(at, "expected a polynomial string");
            try {
                xs.push_back(Poly::parse(R, el[k].get<std::string>()));
            } catch (const RingError& err) {
                bad(at, err.what());
            }
        }
        fill_from_complex(o, koszul_complex(R, xs), j, where, 2);
    } else if (o.kind == "morphism") {
        for (const char* key : {"source", "target"}) {
            const Json& s = need(j, key, where);
            if (!s.is_string() || !known.count(s.get<std::string>()) || known.at(s.get<std::string>()).kind == "morphism")
                bad(where + "." + key, "not a defined module object");
        }
        o.source = j.at("source").get<std::string>();
        o.target = j.at("target").get<std::string>();
        o.map = matrix_of(R, need(j, "matrix", where), where + ".matrix", known.at(o.target).dm.rank(),
                          known.at(o.source).dm.rank());
    } else {
        bad(where + ".kind", "unknown kind '" + o.kind + "'");
    }
    return o;
}

Json rational(const mpq_class& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

Json profile_json(const RankProfile& p) {
    Json h = Json::array();
    for (long long v : p.h) h.push_back(v < 0 ? Json(nullptr) : Json(v));
    Json out = {{"rank", p.rank}, {"h", h}};
    out["total"] = p.total < 0 ? Json(nullptr) : Json(p.total);
    if (p.total >= 0) out["chi"] = p.chi;
    out["dim"] = p.dim;
    out["codim"] = p.codim;
    return out;
}

Json homology_json(const DiffModule& D) {
    DmHomology H = homology(D);
    Json pieces = Json::array();
    for (const auto& piece : H.pieces) {
        Json e = {{"degree", piece.degree}, {"finite", piece.length.finite}};
        e["length"] = piece.length.finite ? Json(piece.length.length) : Json(nullptr);
        pieces.push_back(e);
    }
    Json out = {{"pieces", pieces}};
    out["total"] = H.finite() ? Json(H.total()) : Json(nullptr);
    if (H.finite()) {
        long long chi = 0;
        for (const auto& piece : H.pieces) chi += piece.degree % 2 == 0 ? piece.length.length : -piece.length.length;
        out["chi"] = chi;
    }
    return out;
}

std::vector<int> level_ranks(const FreeFlag& F) {
    std::vector<int> out(F.max_level() + 1, 0);
    for (int l : F.level) ++out[l];
    return out;
}

Json anchored_json(const AnchoredResolution& A) {
    return {{"rank", A.flag.rank()},
            {"level_ranks", level_ranks(A.flag)},
            {"max_stratum", A.flag.max_stratum()},
            {"anchored", is_anchored_resolution(A.flag)},
            {"retract_strong", check_sdr(A.sdr).strong()},
            {"flag", to_json(A.flag)}};
}

/// id + d a + a d for a random constant degree +1 map a.
Matrix random_endo(const DiffModule& D, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-2, 2);
    const RingPtr& R = D.ring();
    Matrix a(R, D.rank(), D.rank());
    for (int r = 0; r < D.rank(); ++r)
        for (int c = 0; c < D.rank(); ++c)
            if (D.wrap(D.degree[c] + 1) == D.wrap(D.degree[r]))
                a.at(r, c) = Poly::constant(R, coeff(rng));
    return Matrix::identity(R, D.rank()) + D.diff * a + a * D.diff;
}

struct Context {
    const Problem& problem;
    const Flags& flags;

    std::optional<int> int_param(const char* key, const std::optional<int>& flag) const {
        if (flag) return flag;
        if (problem.task.contains(key)) return as_int(problem.task.at(key), std::string("task.") + key);
        return std::nullopt;
    }

    std::string name(const char* key, bool fallback) const {
        if (problem.task.contains(key)) {
            const Json& v = problem.task.at(key);
            if (!v.is_string() || !problem.objects.count(v.get<std::string>()))
                bad(std::string("task.") + key, "not a defined object");
            return v.get<std::string>();
        }
        if (!fallback) return {};
        if (problem.objects.count("D")) return "D";
        std::string only;
        int modules = 0;
        for (const auto& [n, o] : problem.objects)
            if (o.kind != "morphism") ++modules, only = n;
        if (modules == 1) return only;
        bad(std::string("task.") + key, "no input named and no single candidate");
    }

    const Object& module(const std::string& n, const char* key) const {
        const Object& o = problem.objects.at(n);
        if (o.kind == "morphism") bad(std::string("task.") + key, "'" + n + "' is a morphism");
        return o;
    }

    FreeFlag flag(const std::string& n, const char* key) const {
        const Object& o = module(n, key);
        if (!o.flag) bad(std::string("task.") + key, "'" + n + "' carries no flag");
        try {
            return dm_to_flag(o.flag->dm, o.flag->level);
        } catch (const FlagError& err) {
            bad("objects." + n + ".level", err.what());
        }
    }

    ResolveOptions options() const {
        ResolveOptions o;
        if (auto cap = int_param("length_cap", flags.length_cap)) o.resolution.length_cap = *cap;
        return o;
    }
};

Outcome dispatch(const std::string& command, const Context& ctx) {
    Outcome out;
    Json res = Json::object();
    const bool morphism_input = command == "check" && ctx.problem.task.contains("input") &&
                                ctx.problem.task.at("input").is_string() &&
                                ctx.problem.objects.count(ctx.problem.task.at("input").get<std::string>()) &&
                                ctx.problem.objects.at(ctx.problem.task.at("input").get<std::string>()).kind == "morphism";
    const std::string input = ctx.name("input", true);
    out.report["input"] = input;

    if (command == "check") {
        if (morphism_input) {
            const Object& f = ctx.problem.objects.at(input);
            bool ok = is_morphism(ctx.problem.objects.at(f.source).dm, ctx.problem.objects.at(f.target).dm, f.map);
            res = {{"ok", ok}};
            out.exit_code = ok ? 0 : 1;
            out.report["result"] = res;
            return out;
        }
        const Object& o = ctx.module(input, "input");
        DmReport rep = dm_check(o.dm);
        res["ok"] = rep.ok;
        if (!rep.ok) {
            res["message"] = rep.message;
            if (rep.row >= 0 && rep.col >= 0) {
                res["entry"] = {rep.row, rep.col};
                res["block"] = {o.dm.degree[rep.row], o.dm.degree[rep.col]};
            }
        } else if (o.flag) {
            try {
                dm_to_flag(o.flag->dm, o.flag->level);
                res["flag"] = true;
            } catch (const FlagError& err) {
                res["ok"] = false;
                res["flag"] = false;
                res["message"] = err.what();
            }
        }
        out.exit_code = res["ok"].get<bool>() ? 0 : 1;
        out.report["result"] = res;
        return out;
    }

    const Object& obj = ctx.module(input, "input");
    const DiffModule& D = obj.dm;
    if (DmReport rep = dm_check(D); !rep.ok) bad("objects." + input, rep.message);

    if (command == "homology") {
        res = homology_json(D);
    } else if (command == "ce-res") {
        CeResolution G = ce_resolution(D, ctx.options());
        int parts[3] = {0, 0, 0};
        for (const auto& g : G.generators) ++parts[static_cast<int>(g.part)];
        res = {{"rank", G.flag.rank()},
               {"parts", {{"B", parts[0]}, {"H", parts[1]}, {"G", parts[2]}}},
               {"level_ranks", level_ranks(G.flag)},
               {"augmentation_is_morphism", is_morphism(G.augmentation)},
               {"flag", to_json(G.flag)}};
        out.exit_code = res["augmentation_is_morphism"].get<bool>() ? 0 : 1;
    } else if (command == "anchor" || command == "quasimin") {
        AnchoredResolution A =
            command == "anchor" ? degenerate_to_homology(D, ctx.options()) : quasiminimal(D, ctx.options());
        res = anchored_json(A);
        out.exit_code = res["anchored"].get<bool>() && res["retract_strong"].get<bool>() ? 0 : 1;
    } else if (command == "lift") {
        DmMorphism phi;
        const std::string mname = ctx.name("morphism", false);
        if (!mname.empty()) {
            const Object& f = ctx.problem.objects.at(mname);
            if (f.kind != "morphism") bad("task.morphism", "'" + mname + "' is not a morphism");
            phi = {ctx.problem.objects.at(f.source).dm, ctx.problem.objects.at(f.target).dm, f.map};
            out.report["input"] = mname;
        } else {
            unsigned long long seed = ctx.flags.seed ? *ctx.flags.seed : ctx.problem.task.value("seed", 0ULL);
            phi = {D, D, random_endo(D, seed)};
            res["seed"] = seed;
        }
        if (!is_morphism(phi)) bad(mname.empty() ? "task" : "objects." + mname, "not a morphism of differential modules");
        bool minimal = ctx.problem.task.value("minimal", true);
        FunctorialDegeneration FD = functorial_degeneration(phi, minimal, ctx.options());
        res["minimal"] = minimal;
        res["source_rank"] = FD.source.flag.rank();
        res["target_rank"] = FD.target.flag.rank();
        res["flag_morphism"] = is_valid(FD.lift);
        res["square_commutes"] = is_valid(FD.square);
        res["lift"] = to_json(FD.lift.map);
        out.exit_code = res["flag_morphism"].get<bool>() && res["square_commutes"].get<bool>() ? 0 : 1;
    } else if (command == "perturb") {
        FreeFlag F = ctx.flag(input, "input");
        Minimized m = minimize(anchor_dm(F), &F.level);
        PerturbedSdr r = perturb_sdr(m.sdr, F.dm.diff - F.stratum(0));
        std::vector<int> levels;
        for (int k : m.kept) levels.push_back(F.level[k]);
        FreeFlag small = dm_to_flag(r.sdr.small, levels);
        SdrReport rep = check_sdr(r.sdr);
        res = {{"rank_before", F.rank()},
               {"rank_after", small.rank()},
               {"strong", rep.strong()},
               {"flag", to_json(small)},
               {"delta_small", to_json(r.delta_small)}};
        out.exit_code = rep.strong() ? 0 : 1;
    } else if (command == "adams") {
        int k = ctx.int_param("k", ctx.flags.k).value_or(2);
        CyclicAdams a = cyclic_adams(D, k, ctx.options());
        long long cp = chi_psi(a), chi = euler_and_profile(D).chi;
        res = {{"chi_psi", cp}, {"chi", chi}};
        if (chi != 0) {
            mpq_class f(mpz_class(static_cast<long>(cp)), mpz_class(static_cast<long>(chi)));
            f.canonicalize();
            res["factor"] = rational(f);
        } else {
            res["factor"] = nullptr;
        }
    } else if (command == "trc") {
        std::optional<int> codim = ctx.int_param("codim", ctx.flags.codim);
        RankProfile p = euler_and_profile(D, codim);
        if (D.modulus != 2) bad("objects." + input + ".modulus", "the rank inequality needs modulus 2");
        TrcResult t = trc_verdict(p);
        res = {{"verdict", to_string(t.verdict)},
               {"bound", rational(t.bound)},
               {"margin", rational(t.margin)},
               {"concentrated", t.concentrated},
               {"codim_bound", t.codim_bound},
               {"profile", profile_json(p)}};
        out.exit_code = t.verdict == Verdict::fails ? 1 : 0;
    } else if (command == "tensor-test") {
        std::string second = ctx.name("input2", false);
        if (second.empty()) second = input;
        const Object& o2 = ctx.module(second, "input2");
        bool flags = obj.flag.has_value() && o2.flag.has_value();
        TensorLength t = tensor_length_test(D, o2.dm, flags);
        res = {{"input2", second},
               {"h_tensor", t.h_tensor},
               {"bound", t.bound},
               {"within", t.within},
               {"applicable", t.applicable}};
        out.exit_code = t.applicable && !t.within ? 1 : 0;
    } else if (command == "frobenius") {
        int e = ctx.int_param("e", ctx.flags.e).value_or(1);
        if (e < 0) bad("task.e", "must be nonnegative");
        DuttaSequence s = dutta_sequence(D, static_cast<unsigned>(e));
        Json values = Json::array();
        for (const auto& v : s.values) values.push_back(rational(v));
        res = {{"e", e}, {"dutta", values}, {"stabilized", s.stabilized},
               {"pullback", to_json(frobenius_dm(D, static_cast<unsigned>(e)))}};
    } else {
        bad("command", "unknown command '" + command + "'");
    }
    out.report["result"] = res;
    return out;
}

}  // namespace

Json to_json(const mpq_class& q) { return rational(q); }

Json to_json(const Matrix& m) { return m.to_strings(); }

Json to_json(const DiffModule& D) {
    Json out = {{"modulus", D.modulus}, {"degree", D.degree}};
    out["weight"] = D.weight;
    out["shift"] = D.shift;
    out["diff"] = D.diff.rows() ? to_json(D.diff) : Json::array();
    return out;
}

Json to_json(const FreeFlag& F) {
    Json out = to_json(F.dm);
    Json ordered = {{"modulus", out["modulus"]}, {"degree", out["degree"]}, {"level", F.level}};
    ordered["weight"] = out["weight"];
    ordered["shift"] = out["shift"];
    ordered["diff"] = out["diff"];
    return ordered;
}

Problem parse_problem(const Json& doc, const Flags& flags) {
    if (!doc.is_object()) bad("$", "expected a JSON object");
    Problem p;
    p.ring = parse_ring(need(doc, "ring", "$"), flags);
    const Json& objs = need(doc, "objects", "$");
    if (!objs.is_object()) bad("objects", "expected an object keyed by name");
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& [name, j] : objs.items()) {
            const std::string where = "objects." + name;
            const bool morphism = j.is_object() && j.value("kind", std::string()) == "morphism";
            if (morphism != (pass == 1)) continue;
            if (!j.is_object()) bad(where, "expected an object");
            p.objects[name] = object_of(p.ring, j, where, p.objects);
        }
    if (doc.contains("task")) {
        if (!doc.at("task").is_object()) bad("task", "expected an object");
        p.task = doc.at("task");
    }
    return p;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string out;
    char buf[3];
    for (unsigned int k = 0; k < len; ++k) {
        std::snprintf(buf, sizeof buf, "%02x", digest[k]);
        out += buf;
    }
    return out;
}

Outcome run(const std::string& command, const std::string& text, const Flags& flags) {
    Outcome out;
    const Json provenance = {{"input_sha256", sha256_hex(text)}};
    try {
        Json doc = Json::parse(text);
        Problem p = parse_problem(doc, flags);
        std::string cmd = command;
        if (cmd.empty()) {
            if (!p.task.contains("command") || !p.task.at("command").is_string())
                bad("task.command", "no command given");
            cmd = p.task.at("command").get<std::string>();
        }
        Context ctx{p, flags};
        Outcome o = dispatch(cmd, ctx);
        out.exit_code = o.exit_code;
        out.report = {{"command", cmd}, {"input", o.report["input"]}, {"result", o.report["result"]}};
    } catch (const Json::parse_error& err) {
        out.exit_code = 2;
        out.report = {{"command", command}, {"error", {{"where", "byte " + std::to_string(err.byte)}, {"message", err.what()}}}};
    } catch (const InputError& err) {
        out.exit_code = 2;
        out.report = {{"command", command}, {"error", {{"where", err.where}, {"message", err.what()}}}};
    } catch (const std::exception& err) {
        out.exit_code = 2;
        out.report = {{"command", command}, {"error", {{"where", "task"}, {"message", err.what()}}}};
    }
    out.report["provenance"] = provenance;
    return out;
}

}  // namespace dmflag::cli
