// Batch CLI over the quaternionic-algebra library: JSON in, JSON report out.
// Exit codes: 0 ok, 1 suite failure, 2 usage, 3 budget exceeded,
// 4 invariant violation.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>

#include "qalg/acceptance.hpp"
#include "qalg/fueter.hpp"
#include "qalg/jsonio.hpp"
#include "qalg/variety.hpp"

using namespace qalg;

namespace {

struct Options {
  std::uint64_t seed = 2026;
  Index budget = kDefaultBudget;
  bool timing = false;
  std::string out;
};

AHModule load_module(const std::string& ref, Json& echo) {
  if (!ref.empty() && ref[0] == '@') {
    echo = ref;
    if (ref == "@H") return AHModule::quaternions();
    if (ref == "@Y") return y_module();
    if (ref == "@U") return u_linear();
    if (ref == "@X1") return x_q(Quaternion::i(1));
    if (ref == "@X2") return x_q(Quaternion::i(2));
    if (ref == "@X3") return x_q(Quaternion::i(3));
    throw UsageError("unknown builtin module " + ref +
                     " (use @H, @Y, @U, @X1, @X2, @X3)");
  }
  std::ifstream in(ref);
  if (!in) throw UsageError("cannot open module file " + ref);
  Json j = Json::parse(in);
  echo = Json{{"file", ref}, {"digest", digest(j)}};
  return module_from_json(j);
}

Json stability_json(const StabilityReport& rep) {
  return Json{{"semistable", rep.semistable},
              {"stable", rep.stable},
              {"probe_sector_dims", rep.probe_sector_dims},
              {"random_sector_dims", rep.random_sector_dims}};
}

Json module_report(const AHModule& m, const Options& opt) {
  StabilityReport st = is_stable(m, {}, 20, opt.seed);
  return Json{{"rank", m.rank()},
              {"dim", m.dim()},
              {"uprime_dim", m.uprime_dim()},
              {"dagger_dim", m.dagger_dim()},
              {"virtual_dim", m.virtual_dim()},
              {"fingerprint", fingerprint_to_json(fingerprint(m))},
              {"stability", stability_json(st)}};
}

void emit_report(const Options& opt, const std::string& command, Json inputs,
                 Json results, double seconds) {
  Json report;
  report["command"] = command;
  report["inputs"] = std::move(inputs);
  report["seed"] = opt.seed;
  report["results"] = std::move(results);
  if (opt.timing) report["runtime_ms"] = seconds * 1000.0;
  std::string text = report.dump(2);
  if (opt.out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(opt.out);
    out << text << "\n";
  }
}

RatMatrix lambda_from_flag(const std::string& flag) {
  // a11,a22,a12,a23,a31 with a33 = -a11-a22
  std::vector<Rational> vals;
  std::string cur;
  for (char ch : flag + ",") {
    if (ch == ',') {
      if (!cur.empty()) vals.push_back(parse_rational(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (vals.size() != 5)
    throw UsageError("--lambda expects a11,a22,a12,a23,a31");
  RatMatrix l(3, 3);
  l(0, 0) = vals[0];
  l(1, 1) = vals[1];
  l(2, 2) = -vals[0] - vals[1];
  l(0, 1) = l(1, 0) = vals[2];
  l(1, 2) = l(2, 1) = vals[3];
  l(2, 0) = l(0, 2) = vals[4];
  return l;
}

RatVector point_from_flag(const std::string& flag) {
  std::vector<Rational> vals;
  std::string cur;
  for (char ch : flag + ",") {
    if (ch == ',') {
      if (!cur.empty()) vals.push_back(parse_rational(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (vals.size() != 9)
    throw UsageError("--point expects v1x,v1y,v1z,v2x,v2y,v2z,v3x,v3y,v3z");
  RatVector v1(3), v2(3), v3(3);
  for (Index l = 0; l < 3; ++l) {
    v1(l) = vals[l];
    v2(l) = vals[3 + l];
    v3(l) = vals[6 + l];
  }
  EHChart chart;  // only the layout matters for building the triple
  RatVector v = RatVector::Zero(9);
  for (Index l = 0; l < 3; ++l) {
    v(3 * l + 0) = v1(l);
    v(3 * l + 1) = v2(l);
    v(3 * l + 2) = v3(l);
  }
  return v;
}

Json quadratic_system_json(const QuadraticSystem& sys) {
  Json eqs = Json::array();
  for (Index r = 0; r < sys.real_equations.rows(); ++r) {
    Json terms = Json::array();
    for (Index a = 0; a < sys.qdual_dim; ++a)
      for (Index b = a; b < sys.qdual_dim; ++b) {
        const Rational& c =
            sys.real_equations(r, monomial_index(a, b, sys.qdual_dim));
        if (c != 0)
          terms.push_back(Json{{"coeff", format_rational(c)},
                               {"monomial", {a, b}}});
      }
    eqs.push_back(Json{
        {"terms", std::move(terms)},
        {"constant",
         format_rational(sys.real_equations(r, sys.monomial_count()))}});
  }
  return Json{{"qdual_dim", sys.qdual_dim},
              {"equations", std::move(eqs)},
              {"rows", to_json(sys.real_equations)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact quaternionic algebra toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "seed for all randomized checks");
  app.add_option("--budget", opt.budget, "ambient real-dimension cap");
  app.add_flag("--timing", opt.timing, "include runtime in the report");
  app.add_option("-o,--out", opt.out, "write the report to a file");

  std::string left, right, module_spec, gens_file, lie_builtin, lambda_flag,
      point_flag, seq_file, family = "eh";
  Index power_k = 2, trunc = 3, gens_grade = 2, fueter_k = 2, fueter_n = 1,
        random_count = 20;
  bool sym = false, alt = false, no_generic_cube = false;

  auto* cmd_module = app.add_subcommand("module", "inspect an AH-module")->fallthrough();
  cmd_module->add_option("--in", module_spec, "module file or @builtin")
      ->required();

  auto* cmd_tensor =
      app.add_subcommand("tensor", "quaternionic tensor product")->fallthrough();
  cmd_tensor->add_option("--left", left)->required();
  cmd_tensor->add_option("--right", right)->required();

  auto* cmd_power = app.add_subcommand("power", "S_H^k or Lambda_H^k")->fallthrough();
  cmd_power->add_option("--in", module_spec)->required();
  cmd_power->add_option("-k", power_k, "power");
  cmd_power->add_flag("--sym", sym);
  cmd_power->add_flag("--alt", alt);

  auto* cmd_stab = app.add_subcommand("stability", "Monte-Carlo stability")->fallthrough();
  cmd_stab->add_option("--in", module_spec)->required();
  cmd_stab->add_option("--random", random_count, "random probe count");

  auto* cmd_exact = app.add_subcommand("exactness", "AH-exactness of 0 -> "
                                                    "M0 -> ... -> Mk -> 0")->fallthrough();
  cmd_exact->add_option("--file", seq_file)->required();

  auto* cmd_free = app.add_subcommand("free", "free H-algebra F^Q")->fallthrough();
  cmd_free->add_option("--gen", module_spec)->required();
  cmd_free->add_option("-K", trunc, "truncation");

  auto* cmd_ideal = app.add_subcommand("ideal", "graded ideal from generators")->fallthrough();
  cmd_ideal->add_option("--gen", module_spec)->required();
  cmd_ideal->add_option("-K", trunc);
  cmd_ideal->add_option("--grade", gens_grade, "generator grade");
  cmd_ideal->add_option("--gens", gens_file,
                        "json {rows: [...]} over the flat grade ambient")
      ->required();

  auto* cmd_quot = app.add_subcommand("quotient", "quotient H-algebra")->fallthrough();
  cmd_quot->add_option("--gen", module_spec)->required();
  cmd_quot->add_option("-K", trunc);
  cmd_quot->add_option("--grade", gens_grade);
  cmd_quot->add_option("--gens", gens_file)->required();

  auto* cmd_hl = app.add_subcommand("hl", "HL-algebra from a Lie algebra")->fallthrough();
  cmd_hl->add_option("--lie", gens_file, "structure constants json");
  cmd_hl->add_option("--builtin", lie_builtin, "so3 | solvable2 | abelian<m>");
  cmd_hl->add_flag("--factored-cube", no_generic_cube,
                   "use the certified factored Lambda^3 instead of the "
                   "generic ambient");

  auto* cmd_var = app.add_subcommand("variety", "M_{P,Q} machinery")->fallthrough();
  auto* var_emit = cmd_var->add_subcommand("emit", "emit real equations")->fallthrough();
  var_emit->add_option("--family", family);
  var_emit->add_option("--lambda", lambda_flag, "a11,a22,a12,a23,a31");
  var_emit->add_option("-K", trunc, "label truncation (even)");
  auto* var_member = cmd_var->add_subcommand("member", "exact membership")->fallthrough();
  var_member->add_option("--point", point_flag)->required();
  var_member->add_option("--lambda", lambda_flag);

  auto* cmd_fueter = app.add_subcommand("fueter", "flat Fueter operator")->fallthrough();
  auto* fueter_dim = cmd_fueter->add_subcommand("dim", "kernel dimension")->fallthrough();
  fueter_dim->add_option("-k", fueter_k)->required();
  auto* fueter_grades =
      cmd_fueter->add_subcommand("grades", "Z/2-invariant grades")->fallthrough();
  fueter_grades->add_option("-K", trunc);
  std::string quotient_group = "z2";
  fueter_grades->add_option("--quotient", quotient_group);
  auto* fueter_delta = cmd_fueter->add_subcommand("delta", "2-form splitting")->fallthrough();
  fueter_delta->add_option("-n", fueter_n);

  auto* cmd_suite = app.add_subcommand("suite", "acceptance battery")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };

  try {
    if (cmd_module->parsed()) {
      Json echo;
      AHModule m = load_module(module_spec, echo);
      emit_report(opt, "module", Json{{"module", echo}},
                  module_report(m, opt), elapsed());
    } else if (cmd_tensor->parsed()) {
      Json le, re;
      AHModule a = load_module(left, le), b = load_module(right, re);
      EmbeddedModule t = qtensor(a, b, opt.budget);
      Json res{{"dim", t.dim()},
               {"prime_dim", t.prime_dim()},
               {"rank", t.base.rank()},
               {"fingerprint", fingerprint_to_json(fingerprint(t.base))}};
      emit_report(opt, "tensor", Json{{"left", le}, {"right", re}}, res,
                  elapsed());
    } else if (cmd_power->parsed()) {
      if (sym == alt) throw UsageError("power: choose exactly one of --sym, --alt");
      Json echo;
      AHModule m = load_module(module_spec, echo);
      EmbeddedModule p = sym ? sym_power(m, power_k, opt.budget)
                             : alt_power(m, power_k, opt.budget);
      Json res{{"dim", p.dim()},
               {"prime_dim", p.prime_dim()},
               {"rank", p.base.rank()},
               {"fingerprint", fingerprint_to_json(fingerprint(p.base))}};
      emit_report(opt, "power", Json{{"module", echo}, {"k", power_k},
                                     {"kind", sym ? "sym" : "alt"}},
                  res, elapsed());
    } else if (cmd_stab->parsed()) {
      Json echo;
      AHModule m = load_module(module_spec, echo);
      StabilityReport st = is_stable(m, {}, random_count, opt.seed);
      emit_report(opt, "stability", Json{{"module", echo}},
                  stability_json(st), elapsed());
    } else if (cmd_exact->parsed()) {
      std::ifstream in(seq_file);
      if (!in) throw UsageError("cannot open " + seq_file);
      Json j = Json::parse(in);
      std::vector<AHModule> mods;
      for (const Json& mj : j.at("modules"))
        mods.push_back(module_from_json(mj));
      std::vector<AHMorphism> fs;
      fs.push_back(AHMorphism::zero(AHModule(), mods.front()));
      const Json& morphs = j.at("morphisms");
      for (size_t k = 0; k + 1 < mods.size(); ++k) {
        const Json& cj = morphs.at(k);
        std::vector<std::vector<Quaternion>> coeff(
            mods[k].rank(), std::vector<Quaternion>(mods[k + 1].rank()));
        for (Index a = 0; a < mods[k].rank(); ++a)
          for (Index b = 0; b < mods[k + 1].rank(); ++b)
            coeff[a][b] =
                Quaternion::from_vector(vector_from_json(cj.at(a).at(b)), 0);
        fs.emplace_back(mods[k], mods[k + 1], coeff);
      }
      fs.push_back(AHMorphism::zero(mods.back(), AHModule()));
      SequenceReport rep = check_sequence(fs);
      Json positions = Json::array();
      for (const auto& p : rep.positions)
        positions.push_back(Json{{"module_exact", p.module_exact},
                                 {"prime_exact", p.prime_exact},
                                 {"image_dim", p.image_dim},
                                 {"kernel_dim", p.kernel_dim}});
      emit_report(opt, "exactness",
                  Json{{"file", seq_file}, {"digest", digest(j)}},
                  Json{{"ah_exact", rep.ah_exact}, {"positions", positions}},
                  elapsed());
    } else if (cmd_free->parsed()) {
      Json echo;
      AHModule m = load_module(module_spec, echo);
      FreeAlgebra alg = FreeAlgebra::build(m, trunc, opt.budget);
      AxiomAReport rep = axiom_a_check(alg);
      Json grades = Json::array();
      for (Index k = 0; k <= trunc; ++k)
        grades.push_back(Json{{"grade", k},
                              {"dim", alg.grade_dim(k)},
                              {"prime_dim", alg.grade_prime_dim(k)}});
      emit_report(opt, "free", Json{{"gen", echo}, {"K", trunc}},
                  Json{{"generator_stable", alg.generator_stable()},
                       {"grades", grades},
                       {"axiom_a",
                        Json{{"commutativity", rep.commutativity_ok},
                             {"associativity", rep.associativity_ok},
                             {"identity", rep.identity_ok},
                             {"violations", rep.violations}}}},
                  elapsed());
    } else if (cmd_ideal->parsed() || cmd_quot->parsed()) {
      Json echo;
      AHModule m = load_module(module_spec, echo);
      FreeAlgebra alg = FreeAlgebra::build(m, trunc, opt.budget);
      std::ifstream in(gens_file);
      if (!in) throw UsageError("cannot open " + gens_file);
      Json gj = Json::parse(in);
      RatMatrix rows = matrix_from_json(gj.at("rows"));
      Subspace gens =
          rows.rows() == 0
              ? Subspace::zero(alg.core_power(gens_grade).ambient_dim())
              : Subspace::from_rows(rows);
      IdealData ideal = ideal_from_generators(alg, gens_grade, gens);
      Json inputs{{"gen", echo},
                  {"K", trunc},
                  {"grade", gens_grade},
                  {"gens_digest", digest(gj)}};
      if (cmd_ideal->parsed()) {
        Json graded = Json::array();
        for (Index k = 0; k <= trunc; ++k)
          graded.push_back(Json{{"grade", k},
                                {"dim", ideal.graded[k].dim()},
                                {"prime_dim", ideal.graded[k].prime_dim()},
                                {"stationary", (bool)ideal.stationary[k]}});
        emit_report(opt, "ideal", inputs,
                    Json{{"graded", graded},
                         {"all_stationary", ideal.all_stationary}},
                    elapsed());
      } else {
        QuotientAlgebra q = quotient_algebra(alg, ideal, opt.seed);
        Json grades = Json::array();
        for (Index k = 0; k <= trunc; ++k)
          grades.push_back(Json{{"grade", k},
                                {"dim", q.grades[k].dim},
                                {"prime_dim", q.grades[k].prime_dim},
                                {"ah_ok", q.grades[k].ah_ok},
                                {"exact", q.grades[k].exact},
                                {"stable", q.grades[k].stable}});
        emit_report(opt, "quotient", inputs,
                    Json{{"grades", grades}, {"all_ok", q.all_ok}}, elapsed());
      }
    } else if (cmd_hl->parsed()) {
      LieAlgebra g;
      Json echo;
      if (!lie_builtin.empty()) {
        echo = lie_builtin;
        if (lie_builtin == "so3")
          g = LieAlgebra::so3();
        else if (lie_builtin == "solvable2")
          g = LieAlgebra::solvable2();
        else if (lie_builtin.rfind("abelian", 0) == 0)
          g = LieAlgebra::abelian(std::stol(lie_builtin.substr(7)));
        else
          throw UsageError("unknown builtin Lie algebra " + lie_builtin);
      } else if (!gens_file.empty()) {
        std::ifstream in(gens_file);
        if (!in) throw UsageError("cannot open " + gens_file);
        Json j = Json::parse(in);
        echo = Json{{"file", gens_file}, {"digest", digest(j)}};
        const Json& cj = j.at("c");
        g.dim = static_cast<Index>(cj.size());
        g.c.assign(g.dim, std::vector<std::vector<Rational>>(
                              g.dim, std::vector<Rational>(g.dim)));
        for (Index a = 0; a < g.dim; ++a)
          for (Index b = 0; b < g.dim; ++b)
            for (Index k = 0; k < g.dim; ++k)
              g.c[a][b][k] =
                  parse_rational(cj.at(a).at(b).at(k).get<std::string>());
      } else {
        throw UsageError("hl: need --lie or --builtin");
      }
      HLAlgebra hl = hl_from_lie(g);
      HLAxiomReport rep =
          check_hl_axioms(hl, opt.budget, !no_generic_cube);
      PoissonReport prep =
          poisson_on_free(hl, 3, opt.budget, !no_generic_cube);
      emit_report(
          opt, "hl", Json{{"lie", echo}},
          Json{{"carrier_dim", hl.carrier.dim()},
               {"morphism_ok", rep.morphism_ok},
               {"antisymmetry", rep.antisym_ok},
               {"jacobi", rep.jacobi_ok},
               {"jacobi_generic", rep.jacobi_generic},
               {"lambda3_dim", rep.lambda3_dim},
               {"p2i", prep.p2i_ok},
               {"derivation", prep.derivation_ok},
               {"graded", prep.graded_ok},
               {"mixed_antisymmetry", prep.mixed_antisym_ok}},
          elapsed());
    } else if (cmd_var->parsed()) {
      if (family != "eh") throw UsageError("only --family eh is built in");
      RatMatrix lambda = lambda_flag.empty() ? RatMatrix::Zero(3, 3)
                                             : lambda_from_flag(lambda_flag);
      if (var_emit->parsed()) {
        Index label = (trunc >= 4 && trunc % 2 == 0) ? trunc : 4;
        EHFamily fam = eh_family(lambda, label, opt.budget);
        Json graded = Json::array();
        for (Index k = 0; k < static_cast<Index>(fam.quotient.grades.size());
             ++k)
          graded.push_back(Json{{"label", 2 * k},
                                {"free_dim", fam.algebra.grade_dim(k)},
                                {"ideal_dim", fam.ideal.graded[k].dim()},
                                {"quotient_dim", fam.quotient.grades[k].dim}});
        emit_report(opt, "variety emit",
                    Json{{"family", family}, {"lambda", to_json(lambda)}},
                    Json{{"case", fam.case_index},
                         {"system", quadratic_system_json(fam.system)},
                         {"grades", graded},
                         {"filtered_ideal_dims", fam.filtered_ideal_dims}},
                    elapsed());
      } else if (var_member->parsed()) {
        EHFamily fam = eh_family(lambda, 4, opt.budget);
        RatVector x = point_from_flag(point_flag);
        bool in = fam.system.member(x);
        Json res{{"member", in}};
        if (in) res["jacobian_rank"] = jacobian_rank(fam.system, x);
        emit_report(opt, "variety member",
                    Json{{"family", family},
                         {"lambda", to_json(lambda)},
                         {"point", point_flag}},
                    res, elapsed());
      } else {
        throw UsageError("variety: need emit or member");
      }
    } else if (cmd_fueter->parsed()) {
      if (fueter_dim->parsed()) {
        FueterKernel fk = fueter_kernel(fueter_k);
        emit_report(opt, "fueter dim", Json{{"k", fueter_k}},
                    Json{{"dim", fk.kernel_space.dim()},
                         {"prime_dim", fk.module.uprime_dim()},
                         {"rank", fk.module.rank()}},
                    elapsed());
      } else if (fueter_grades->parsed()) {
        if (quotient_group != "z2")
          throw UsageError("fueter grades: only --quotient z2 is built in");
        std::vector<Index> dims = invariant_grades(trunc);
        emit_report(opt, "fueter grades",
                    Json{{"K", trunc}, {"quotient", quotient_group}},
                    Json{{"dims", dims}}, elapsed());
      } else if (fueter_delta->parsed()) {
        auto [p, m] = delta_split(fueter_n);
        emit_report(opt, "fueter delta", Json{{"n", fueter_n}},
                    Json{{"lambda_plus", p}, {"lambda_minus", m}}, elapsed());
      } else {
        throw UsageError("fueter: need dim, grades or delta");
      }
    } else if (cmd_suite->parsed()) {
      bool all = true;
      Json results = Json::array();
      for (int i = 1; i <= 8; ++i) {
        auto r = acceptance::run_one(i, opt.seed, opt.budget);
        std::fprintf(stderr, "[%s] %d. %s: %s (%.1fs)\n",
                     r.pass ? "PASS" : "FAIL", r.index, r.name.c_str(),
                     r.detail.c_str(), r.seconds);
        Json jr{{"index", r.index},
                {"name", r.name},
                {"pass", r.pass},
                {"detail", r.detail}};
        if (opt.timing) jr["seconds"] = r.seconds;
        results.push_back(std::move(jr));
        all = all && r.pass;
      }
      emit_report(opt, "suite", Json::object(), Json{{"criteria", results}},
                  elapsed());
      return all ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const Json::exception& e) {
    std::cerr << "usage error: bad json: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
