#include "euler_plane/report.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

namespace euler_plane::cli {

using nlohmann::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownPrimitive:
    case ErrorCode::UndeclaredGenerator:
    case ErrorCode::BadParameter: return kParseError;
    case ErrorCode::IdentityViolated:
    case ErrorCode::WritheChanged:
    case ErrorCode::NotARelator: return kIdentityViolation;
    case ErrorCode::IoError: return kIoFailure;
    default: return kNumericalFailure;
  }
}

std::string remediation_hint(ErrorCode code) {
  switch (code) {
    case ErrorCode::TailNotVanished: return "increase N in [method]";
    case ErrorCode::ResidueTooLarge: return "increase R or move the basepoint further from the supports";
    case ErrorCode::PathHitsCenter:
    case ErrorCode::ForbiddenRegionViolated: return "increase R (infinity lift) or shrink the forbidden disk";
    case ErrorCode::OrbitMaybeNonProper:
      return "the orbit of p returns; set allow_non_proper = true for a windowed, non-certified sum";
    case ErrorCode::NonTransverseContact: return "try another seed";
    case ErrorCode::VertexNotImmersed:
    case ErrorCode::DegenerateEdge:
    case ErrorCode::CuspCorner: return "choose another basepoint in [method]";
    case ErrorCode::FixedPointSuspected: return "alpha may have a fixed point near the arc; the free-case tools do not apply";
    case ErrorCode::NotApplicable: return "this method needs data the scene does not provide";
    case ErrorCode::SamplingFailed: return "the curves are too wild to sample; simplify the scene";
    default: return {};
  }
}

std::string ReportDocument::text() const { return json{{"body", body}, {"timings", timings}}.dump(2) + "\n"; }

namespace {

constexpr Method kAll[] = {Method::Lift, Method::Graphical, Method::SignedSum, Method::WritheDifference};

std::optional<Method> method_from(const std::string& s) {
  for (Method m : kAll)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

json table_json(const CoefficientTable& t) {
  json values = json::array();
  for (int i = -t.N; i <= t.N; ++i) values.push_back(t.at(i));
  return {{"N", t.N},
          {"values", values},
          {"tail_bound", t.tail_bound},
          {"support", t.support()},
          {"signed_sum", t.signed_sum()},
          {"crossings", t.crossings.size()},
          {"perturbations", t.perturbations}};
}

json report_json(const EulerReport& r) {
  json j{{"status", "ok"}, {"value", r.value}, {"certified", r.certified}, {"diagnostics", r.diagnostics},
         {"notes", r.notes}};
  if (r.table) j["table"] = table_json(*r.table);
  return j;
}

json error_json(const Error& e) {
  json j{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  const std::string hint = remediation_hint(e.code());
  if (!hint.empty()) j["hint"] = hint;
  return j;
}

void collect_annuli(const MapExpr& e, std::vector<Annulus>& out) {
  if (e.is_identity()) return;
  if (const auto a = annulus_support(e)) {
    out.push_back(*a);
    return;
  }
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, detail::Compose>) {
          for (const MapExpr& f : n.factors) collect_annuli(f, out);
        } else if constexpr (std::is_same_v<T, detail::Inverse> || std::is_same_v<T, detail::Power>) {
          collect_annuli(n.child, out);
        } else if constexpr (std::is_same_v<T, detail::ConjProduct>) {
          const int lo = n.indices == IndexSet::All ? -4 : 0;
          for (int k = lo; k <= 4; ++k)
            if (const auto a = annulus_support(product_factor(e, k))) out.push_back(*a);
        }
      },
      e.node()->content);
}

std::vector<Point> points_of(const SampledCurve& c) {
  std::vector<Point> p;
  for (const CurveSample& s : c.samples()) p.push_back(s.point);
  return p;
}

}  // namespace

ReportDocument run_scene(const SceneFile& scene, const RunSettings& settings) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  ReportDocument doc;
  auto elapsed = [](Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); };
  auto log = [&](const std::string& line) {
    if (settings.log) *settings.log << line << "\n";
  };
  auto raise_exit = [&](int code) {
    if (code == kIdentityViolation || doc.exit_code == kOk) doc.exit_code = code;
  };

  const std::string method_name = settings.method.value_or(scene.method.name.value_or("all"));
  const std::uint64_t seed = settings.seed.value_or(scene.method.seed.value_or(1));
  const int N = scene.method.N.value_or(50);
  const int n = scene.method.n.value_or(0);
  const double tolerance = scene.method.tolerance.value_or(1e-9);

  zoo::RunOptions options;
  options.N = N;
  options.signed_sum.seed = seed;
  options.signed_sum.splice_radius = scene.method.splice_radius.value_or(0.0);
  options.signed_sum.allow_non_proper = scene.method.allow_non_proper.value_or(false);

  json& body = doc.body;
  body["format"] = "euler-plane report 1";
  body["scene"] = print_scene(scene);
  body["method"] = method_name;
  body["seed"] = seed;

  const auto t_build = Clock::now();
  const zoo::Recipe recipe = build_recipe(scene);
  doc.timings["build"] = elapsed(t_build);
  body["action"] = {{"name", recipe.name}, {"genus", recipe.action.genus}, {"parameters", recipe.parameters}};
  if (recipe.expected) body["action"]["expected"] = *recipe.expected;

  // the relator is the first thing every method relies on
  const auto t_rel = Clock::now();
  const RelatorReport rel = relator_check(recipe.action, standard_samples(recipe.action, 200, seed), tolerance);
  doc.timings["relator"] = elapsed(t_rel);
  body["checks"]["relator"] = {{"passed", rel.passed},
                               {"max_displacement", rel.max_displacement},
                               {"samples", rel.samples},
                               {"tolerance", tolerance}};
  if (!rel.passed) raise_exit(kIdentityViolation);
  log("relator: " + std::string(rel.passed ? "ok" : "FAILED") + " (max displacement " +
      std::to_string(rel.max_displacement) + ")");

  std::vector<Method> methods;
  const bool all = method_name == "all";
  if (all)
    methods.assign(std::begin(kAll), std::end(kAll));
  else if (const auto m = method_from(method_name))
    methods.push_back(*m);
  else
    throw Error(ErrorCode::BadParameter, "unknown method '" + method_name + "'");

  std::map<Method, EulerReport> done;
  for (Method m : methods) {
    const std::string name(to_string(m));
    const auto t0 = Clock::now();
    try {
      EulerReport r = zoo::run(recipe, m, options);
      body["results"][name] = report_json(r);
      log(name + ": " + std::to_string(r.value) + (r.certified ? "" : " (not certified)"));
      done.emplace(m, std::move(r));
    } catch (const Error& e) {
      // in `all` mode, methods whose hypotheses fail are skipped, not failed
      const bool skip = all && (e.code() == ErrorCode::NotApplicable || e.code() == ErrorCode::OrbitMaybeNonProper);
      json j = error_json(e);
      j["status"] = skip ? "skipped" : "error";
      body["results"][name] = j;
      log(name + ": " + (skip ? "skipped: " : "error: ") + e.what());
      if (!skip) raise_exit(exit_code_for(e.code()));
    }
    doc.timings["methods"][name] = elapsed(t0);
  }

  // agreement among certified values
  json agreement{{"values", json::object()}};
  std::optional<int> common;
  bool agree = true;
  for (const auto& [m, r] : done) {
    if (!r.certified) continue;
    agreement["values"][std::string(to_string(m))] = r.value;
    if (common && *common != r.value) agree = false;
    common = common.value_or(r.value);
  }
  agreement["agree"] = agree;
  if (recipe.expected) {
    const bool matches = !common || (agree && *common == *recipe.expected);
    agreement["matches_expected"] = matches;
    agree = agree && matches;
  }
  body["agreement"] = agreement;
  if (!agree) raise_exit(kIdentityViolation);

  if (n > 0 && recipe.tau && done.count(Method::SignedSum)) {
    const auto t0 = Clock::now();
    try {
      const CoveringTrickReport c = covering_trick_report(recipe.action, *recipe.tau, n, N, options.signed_sum);
      json direct, conv;
      for (const auto& [j, v] : c.direct) direct[std::to_string(j)] = v;
      for (const auto& [j, v] : c.convolution) conv[std::to_string(j)] = v;
      body["checks"]["covering_trick"] = {{"n", n},
                                          {"euler", c.euler},
                                          {"weighted_sum", c.weighted_sum},
                                          {"convolution_signed_sum", c.convolution_signed_sum},
                                          {"direct", direct},
                                          {"convolution", conv},
                                          {"passed", c.passed}};
      if (!c.passed) raise_exit(kIdentityViolation);
      log("covering trick n=" + std::to_string(n) + ": " + (c.passed ? "ok" : "FAILED"));
    } catch (const Error& e) {
      body["checks"]["covering_trick"] = error_json(e);
      raise_exit(exit_code_for(e.code()));
    }
    doc.timings["covering_trick"] = elapsed(t0);
  }

  if (settings.figure) {
    SvgFigure& f = doc.figure;
    for (const MapExpr& g : recipe.action.generators) collect_annuli(g, f.annuli);
    if (const auto it = done.find(Method::SignedSum); it != done.end() && it->second.table) {
      const CoefficientTable& t = *it->second.table;
      const MapExpr& alpha = recipe.action.a(1);
      const MapExpr& beta = recipe.action.b(1);
      f.curves.push_back({points_of(*recipe.tau), "tau", true});
      f.curves.push_back({points_of(push_forward(alpha, *recipe.tau)), "image", true});
      const int reach = std::min(t.tail_bound, t.N);
      for (int i = -reach; i <= reach; ++i)
        if (i != 0) f.curves.push_back({points_of(push_forward(power(beta, i), *recipe.tau)), "orbit", true});
      for (const IndexedCrossing& c : t.crossings) f.crossings.push_back({c.event.location, c.event.sign});
      for (int i = -t.N; i <= t.N; ++i) f.bars.emplace_back(i, t.at(i));
    } else if (done.count(Method::Graphical)) {
      const DevelopedBoundary d = develop_boundary(
          recipe.action, default_base_arcs(recipe.action, recipe.graphical_basepoint), recipe.graphical_basepoint);
      f.curves.push_back({points_of(d.smoothed), "boundary", true});
    }
    if (n > 0) f.xn = n;
  }

  body["exit_code"] = doc.exit_code;
  doc.timings["total"] = elapsed(t_start);
  return doc;
}

}  // namespace euler_plane::cli
