// Command line interface: field inspection, existence decisions, triple
// construction, class counting, q-expansion export and transformation
// verification, with machine-readable JSON output.
//
// Exit codes: 0 success / exists, 1 clean negative, 2 usage error,
// 3 tolerance breach.

#include "CLI11.hpp"
#include "json.hpp"

#include "hmtheta/existence.hpp"
#include "hmtheta/theta.hpp"

#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace hmtheta;

namespace {

struct Config {
    long D = 0;
    bool rational = false;
    std::string weights = "1/2";
    std::string bound = "20";
    double tol = 1e-9;
    unsigned long seed = 1;
    std::string format = "json";
    std::string out;
    int words = 50;
    int word_len = 6;
    int points = 5;
};

FieldCtx make_ctx(const Config& cfg) {
    if (cfg.rational)
        return FieldCtx::rationals();
    if (cfg.D <= 1)
        throw CLI::ValidationError("--D must be > 1 (or pass --rational)");
    return FieldCtx::quadratic(cfg.D);
}

std::vector<HalfWeight> parse_weights(const FieldCtx& ctx, const std::string& s) {
    std::vector<HalfWeight> w;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok == "1/2")
            w.push_back(HalfWeight::Half);
        else if (tok == "3/2")
            w.push_back(HalfWeight::ThreeHalves);
        else
            throw CLI::ValidationError("weights must be a comma list of 1/2 and 3/2");
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (static_cast<int>(w.size()) != ctx.degree())
        throw CLI::ValidationError("weights length must equal the field degree");
    return w;
}

Rat parse_rat(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos)
        return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

json rat_json(const Rat& r) { return to_string(r); }

json elem_json(const QuadElem& e) {
    return json{{"x", rat_json(e.x)}, {"y", rat_json(e.y)}};
}

json ideal_json(const FracIdeal& a) {
    return json{{"scale", rat_json(a.scale)},
                {"a", a.a.str()},
                {"b", a.b.str()}};
}

const char* kind_name(PlaceKind k) {
    switch (k) {
    case PlaceKind::Rational: return "rational";
    case PlaceKind::Split: return "split";
    case PlaceKind::Inert: return "inert";
    case PlaceKind::Ramified: return "ramified";
    }
    return "?";
}

json place_json(const PrimePlace& v) {
    return json{{"p", v.p}, {"kind", kind_name(v.kind)}, {"f", v.f},
                {"e", v.e},  {"label", v.label},         {"q", v.q()}};
}

json triple_json(const GTriple& t) {
    json s3 = json::array();
    for (auto& v : t.s3)
        s3.push_back(place_json(v));
    json w = json::array();
    for (auto wi : t.weights)
        w.push_back(wi == HalfWeight::Half ? "1/2" : "3/2");
    return json{{"beta", elem_json(t.beta)},
                {"s3", s3},
                {"ideal", ideal_json(t.ideal)},
                {"weights", w}};
}

void emit(const Config& cfg, const json& j) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        os = &file;
    }
    if (cfg.format == "json") {
        *os << j.dump(2) << "\n";
        return;
    }
    // text: flat key: value lines
    for (auto& [k, v] : j.items())
        *os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

int cmd_field(const Config& cfg) {
    FieldCtx ctx = make_ctx(cfg);
    if (!ctx.two_splits()) {
        json j{{"field", "Q(sqrt(" + std::to_string(ctx.D) + "))"},
               {"error", "no multiplier system of half-integral weight exists: 2 does not split completely"}};
        emit(cfg, j);
        return 1;
    }
    json j;
    j["field"] = ctx.D == 0 ? "Q" : "Q(sqrt(" + std::to_string(ctx.D) + "))";
    j["discriminant"] = ctx.disc().str();
    j["different"] = ideal_json(different(ctx));
    json p2 = json::array(), p3 = json::array(), t3 = json::array();
    for (auto& v : primes_above(ctx, 2))
        p2.push_back(place_json(v));
    for (auto& v : primes_above(ctx, 3))
        p3.push_back(place_json(v));
    for (auto& v : T3_places(ctx))
        t3.push_back(place_json(v));
    j["primes_above_2"] = p2;
    j["primes_above_3"] = p3;
    j["T3"] = t3;
    if (ctx.D != 0) {
        auto [eps, n] = fundamental_unit(ctx);
        j["fundamental_unit"] = elem_json(eps);
        j["unit_norm"] = n;
        j["narrow_class_number"] = narrow_class_group(ctx).size();
    }
    emit(cfg, j);
    return 0;
}

int cmd_exists(const Config& cfg, bool with_triple, bool with_count) {
    FieldCtx ctx = make_ctx(cfg);
    auto weights = parse_weights(ctx, cfg.weights);
    if (!ctx.two_splits()) {
        emit(cfg, json{{"exists", false},
                       {"error", "no multiplier system of half-integral weight exists: 2 does not split completely"}});
        return 1;
    }
    json j;
    std::string label;
    bool exists;
    if (ctx.D == 0) {
        exists = true;
        label = weights[0] == HalfWeight::Half ? "C2" : "C1";
    } else {
        auto rep = quadratic_criteria(ctx, weights);
        exists = rep.exists;
        label = rep.case_label;
    }
    j["exists"] = exists;
    j["case"] = label;
    if (exists && with_triple) {
        auto t = construct_triple(ctx, weights);
        if (!t)
            throw Error("criteria and construction disagree");
        j["witness"] = triple_json(*t);
    }
    if (with_count) {
        ClassGroup cg = narrow_class_group(ctx);
        j["class_count"] = equiv_classes(ctx, cg, weights);
    }
    emit(cfg, j);
    return exists ? 0 : 1;
}

int cmd_theta(const Config& cfg) {
    FieldCtx ctx = make_ctx(cfg);
    auto weights = parse_weights(ctx, cfg.weights);
    auto t = construct_triple(ctx, weights);
    if (!t) {
        emit(cfg, json{{"exists", false}});
        return 1;
    }
    ThetaExpansion exp = q_expansion(ctx, *t, parse_rat(cfg.bound));
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        os = &file;
    }
    for (auto& e : exp.entries) {
        json line{{"nu", elem_json(e.nu)},
                  {"trace", static_cast<double>(e.trace)},
                  {"xi", elem_json(e.xi)},
                  {"sign", e.sign},
                  {"coeff", e.coeff}};
        *os << line.dump() << "\n";
    }
    return 0;
}

int cmd_verify(const Config& cfg) {
    FieldCtx ctx = make_ctx(cfg);
    auto weights = parse_weights(ctx, cfg.weights);
    auto t = construct_triple(ctx, weights);
    if (!t) {
        emit(cfg, json{{"exists", false}});
        return 1;
    }
    SuiteReport rep = transform_suite(ctx, *t, cfg.words, cfg.word_len, cfg.points,
                                      cfg.tol, cfg.seed);
    json j{{"words", rep.words},
           {"points_per_word", cfg.points},
           {"tol", cfg.tol},
           {"max_rel_err", rep.max_rel_err},
           {"pass", rep.pass}};
    emit(cfg, j);
    return rep.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-integral weight Hilbert modular theta series for SL2(o)"};
    app.require_subcommand(1);

    Config cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--D", cfg.D, "square-free D > 1 for Q(sqrt D)");
        sub->add_flag("--rational", cfg.rational, "work over Q");
        sub->add_option("--weights", cfg.weights, "comma list of 1/2 and 3/2");
        sub->add_option("--format", cfg.format, "json or text")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--out", cfg.out, "write output to a file");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--tol", cfg.tol, "numeric tolerance");
        sub->add_option("--bound", cfg.bound, "trace cutoff (integer or fraction)");
    };

    auto* field = app.add_subcommand("field", "discriminant, places, unit, class number");
    auto* exists = app.add_subcommand("exists", "decide existence of a triple");
    auto* triple = app.add_subcommand("triple", "construct a witness triple");
    auto* count = app.add_subcommand("count", "number of equivalence classes");
    auto* theta = app.add_subcommand("theta", "q-expansion export (JSON lines)");
    auto* verify = app.add_subcommand("verify", "random-word transformation suite");
    for (auto* sub : {field, exists, triple, count, theta, verify})
        add_common(sub);
    verify->add_option("--words", cfg.words, "number of random words");
    verify->add_option("--word-len", cfg.word_len, "maximal word length");
    verify->add_option("--points", cfg.points, "sample points per word");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (field->parsed())
            return cmd_field(cfg);
        if (exists->parsed())
            return cmd_exists(cfg, false, false);
        if (triple->parsed())
            return cmd_exists(cfg, true, false);
        if (count->parsed())
            return cmd_exists(cfg, true, true);
        if (theta->parsed())
            return cmd_theta(cfg);
        if (verify->parsed())
            return cmd_verify(cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
