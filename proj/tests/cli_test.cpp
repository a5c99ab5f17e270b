#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "euler_plane/report.hpp"

using namespace euler_plane;
using namespace euler_plane::cli;

namespace {

const char* kMinimal = "euler-plane scene 1\n[group]\ngenus = 1\nrecipe = bestvina(n=2)\n";

SceneError parse_error(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const SceneError& e) {
    return e;
  }
  ADD_FAILURE() << "parsed:\n" << text;
  return SceneError(ErrorCode::InvalidArgument, {}, "");
}

std::string custom_scene(const std::string& a1, const std::string& extra = "") {
  return "euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\nb = translation(x=1, y=0)\n"
         "t = twist(r_in=0.2, r_out=0.4, power=1)\n[generators]\na1 = " +
         a1 + "\nb1 = b\n" + extra;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

// Random word over {a, b, c} in the scene grammar.
std::string random_word_text(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
  const char* atoms[] = {"a", "b", "c", "id"};
  switch (pick(rng)) {
    case 0:
    case 1: return atoms[std::uniform_int_distribution<int>(0, 3)(rng)];
    case 2: return random_word_text(rng, depth - 1) + " * " + random_word_text(rng, depth - 1);
    case 3: return "(" + random_word_text(rng, depth - 1) + ")^" + std::to_string(std::uniform_int_distribution<int>(-3, 3)(rng));
    default: return "(" + random_word_text(rng, depth - 1) + ")'";
  }
}

}  // namespace

// --- parsing --------------------------------------------------------------------

TEST(Scene, MinimalRecipeParses) {
  const SceneFile s = parse_scene(kMinimal);
  ASSERT_TRUE(s.recipe);
  EXPECT_EQ(s.recipe->name, "bestvina");
  EXPECT_EQ(s.recipe->parameters.at("n"), 2.0);
  EXPECT_EQ(s.genus, 1);
}

TEST(Scene, WordGrammar) {
  const WordExpr w = parse_word("b^2 * t * b^-2");
  ASSERT_EQ(w.kind, WordExpr::Kind::Product);
  ASSERT_EQ(w.children.size(), 3u);
  EXPECT_EQ(w.children[0].kind, WordExpr::Kind::Power);
  EXPECT_EQ(w.children[0].exponent, 2);
  EXPECT_EQ(w.children[0].children[0].name, "b");
  EXPECT_EQ(w.children[1].name, "t");
  EXPECT_EQ(w.children[2].exponent, -2);
  EXPECT_EQ(parse_word("(a * b)'").kind, WordExpr::Kind::Inverse);
  EXPECT_EQ(print_word(parse_word("x'^2 * (a*b)^-1")), "x'^2 * (a * b)^-1");
}

TEST(Scene, UndeclaredNameReportedAtItsPosition) {
  const SceneError e = parse_error(custom_scene("t * q"));
  EXPECT_EQ(e.code(), ErrorCode::UndeclaredGenerator);
  EXPECT_EQ(e.position().line, 8);
  EXPECT_EQ(e.position().column, 10);
}

TEST(Scene, UnknownKeysRejected) {
  const SceneError e = parse_error(std::string(kMinimal) + "[method]\nname = lift\nwindow = 3\n");
  EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
  EXPECT_EQ(e.position().line, 7);
  EXPECT_NE(std::string(e.what()).find("expected"), std::string::npos);
  EXPECT_EQ(parse_error(std::string(kMinimal) + "[weather]\n").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error(custom_scene("t", "c1 = t\n")).code(), ErrorCode::SyntaxError);
}

TEST(Scene, ErrorsCarryCodes) {
  EXPECT_EQ(parse_error("euler-plane scene 2\n").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("[group]\n").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("euler-plane scene 1\n[group]\nrecipe = nothing()\n").code(), ErrorCode::UnknownPrimitive);
  EXPECT_EQ(parse_error("euler-plane scene 1\n[group]\nrecipe = bestvina(m=1)\n").code(), ErrorCode::BadParameter);
  EXPECT_EQ(parse_error("euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\ns = spiral(k=1)\n").code(),
            ErrorCode::UnknownPrimitive);
  const std::string bad_twist = "euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\nt = twist(r_in=2, r_out=1, power=1)\n"
                                "[generators]\na1 = t\nb1 = t\n";
  const SceneError e = parse_error(bad_twist);
  EXPECT_EQ(e.code(), ErrorCode::BadParameter);
  EXPECT_EQ(e.position().line, 5);
  EXPECT_NO_THROW(parse_scene(custom_scene("t")));
}

TEST(Scene, MissingGeneratorRejected) {
  const std::string text = "euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\nb = translation(x=1, y=0)\n"
                           "[generators]\nb1 = b\n";
  EXPECT_EQ(parse_error(text).code(), ErrorCode::SyntaxError);
}

TEST(Scene, CommentsAndBlankLinesIgnored) {
  const SceneFile s = parse_scene("# a comment\n\neuler-plane scene 1\n  # indented\n[group]\n\nrecipe = trivial\n");
  EXPECT_EQ(s.recipe->name, "trivial");
}

// --- round trip ---------------------------------------------------------------------

TEST(SceneProperty, PrintParseRoundTrip) {
  for (const char* path : {"bestvina", "torus_shear", "genus2", "custom_bestvina"}) {
    const SceneFile s = parse_scene(slurp(std::string(SCENE_DIR) + "/" + path + ".scene"));
    const std::string printed = print_scene(s);
    EXPECT_EQ(parse_scene(printed), s) << path;
    EXPECT_EQ(print_scene(parse_scene(printed)), printed) << path;
  }
}

TEST(SceneProperty, RandomScenesRoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    std::ostringstream t;
    t.precision(17);
    t << "euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\n"
      << "a = translation(x=" << u(rng) << ", y=" << u(rng) << ")\n"
      << "b = rotation(angle=" << u(rng) << ", cx=" << u(rng) << ")\n"
      << "c = dilation(factor=" << std::abs(u(rng)) + 0.1 << ")\n"
      << "[generators]\na1 = " << random_word_text(rng, 3) << "\nb1 = " << random_word_text(rng, 3) << "\n"
      << "[method]\nN = " << (i % 40 + 1) << "\nbasepoint = (" << u(rng) << ", " << u(rng) << ")\ntolerance = "
      << std::abs(u(rng)) * 1e-9 + 1e-15 << "\nseed = " << rng() % 100000 << "\n[output]\nsvg = out dir/fig " << i
      << ".svg\n";
    const SceneFile s = parse_scene(t.str());
    EXPECT_EQ(parse_scene(print_scene(s)), s) << t.str();
  }
}

// --- running ---------------------------------------------------------------------------

TEST(Run, BestvinaLiftGivesN) {
  const ReportDocument d = run_scene(parse_scene(std::string(kMinimal) + "[method]\nname = lift\n"));
  EXPECT_EQ(d.body["results"]["lift"]["value"], 2);
  EXPECT_EQ(d.exit_code, kOk);
}

TEST(Run, TorusShearAllAgree) {
  const ReportDocument d = run_scene(parse_scene(slurp(std::string(SCENE_DIR) + "/torus_shear.scene")));
  for (const char* m : {"lift", "graphical", "signed-sum", "writhe-diff"}) EXPECT_EQ(d.body["results"][m]["value"], 0) << m;
  EXPECT_TRUE(d.body["agreement"]["agree"].get<bool>());
  EXPECT_TRUE(d.body["checks"]["covering_trick"]["passed"].get<bool>());
  EXPECT_EQ(d.exit_code, kOk);
}

TEST(Run, GenusTwoGraphicalWinding) {
  const ReportDocument d = run_scene(parse_scene("euler-plane scene 1\n[group]\nrecipe = genus2_smooth(n=1)\n"
                                                 "[method]\nname = graphical\n"));
  EXPECT_EQ(d.body["results"]["graphical"]["value"], 1);
  // wind(delta) = e - 1 + 2g
  EXPECT_EQ(d.body["results"]["graphical"]["diagnostics"]["turning"], 4.0);
}

TEST(Run, CustomSceneMatchesRecipe) {
  const ReportDocument d = run_scene(parse_scene(slurp(std::string(SCENE_DIR) + "/custom_bestvina.scene")));
  EXPECT_EQ(d.body["results"]["graphical"]["value"], 1);
}

TEST(Run, ReportsAreDeterministic) {
  const SceneFile s = parse_scene("euler-plane scene 1\n[group]\nrecipe = random_torus(seed=3)\n[method]\nn = 1\n");
  const ReportDocument a = run_scene(s);
  const ReportDocument b = run_scene(s);
  EXPECT_EQ(a.body.dump(), b.body.dump());
  EXPECT_TRUE(a.timings.contains("total"));
  EXPECT_FALSE(a.body.contains("timings"));
}

TEST(Run, SeedOverrideRecorded) {
  RunSettings settings;
  settings.seed = 99;
  settings.method = "lift";
  EXPECT_EQ(run_scene(parse_scene(kMinimal), settings).body["seed"], 99);
}

TEST(Run, InapplicableMethodsSkippedInAll) {
  const ReportDocument d =
      run_scene(parse_scene("euler-plane scene 1\n[group]\nrecipe = commuting_rotation_twist()\n"));
  EXPECT_EQ(d.body["results"]["signed-sum"]["status"], "skipped");
  EXPECT_TRUE(d.body["results"]["signed-sum"].contains("hint"));
  EXPECT_EQ(d.exit_code, kOk);
}

TEST(Run, NumericalFailureExitCode) {
  const ReportDocument d = run_scene(
      parse_scene("euler-plane scene 1\n[group]\nrecipe = torus_shear()\n[method]\nname = signed-sum\nN = 1\n"));
  EXPECT_EQ(d.body["results"]["signed-sum"]["code"], "TailNotVanished");
  EXPECT_EQ(d.body["results"]["signed-sum"]["hint"], "increase N in [method]");
  EXPECT_EQ(d.exit_code, kNumericalFailure);
}

// --- figures ------------------------------------------------------------------------------

TEST(Svg, CrossingMarksMatchEvents) {
  for (const char* recipe : {"torus_shear()", "random_torus(seed=2)"}) {
    RunSettings settings;
    settings.figure = true;
    settings.method = "signed-sum";
    const ReportDocument d =
        run_scene(parse_scene(std::string("euler-plane scene 1\n[group]\nrecipe = ") + recipe + "\n"), settings);
    const std::string svg = render_svg(d.figure);
    EXPECT_EQ(count(svg, "class=\"crossing\""), d.body["results"]["signed-sum"]["table"]["crossings"].get<int>())
        << recipe;
    EXPECT_EQ(count(svg, "class=\"crossing\""), static_cast<int>(d.figure.crossings.size()));
  }
}

TEST(Svg, XnGraphPlateaus) {
  const auto g = xn_graph(3, 12);
  for (const auto& [i, v] : g) {
    if (i >= 7) EXPECT_EQ(v, 7);
    if (i <= -7) EXPECT_EQ(v, -7);
    if (std::abs(i) < 7) EXPECT_EQ(v, i);
  }
  SvgFigure f;
  f.xn = 3;
  const std::string svg = render_svg(f);
  EXPECT_EQ(count(svg, "<polyline class=\"xn\""), 1);
  EXPECT_EQ(svg, render_svg(f));
}

TEST(Svg, EmptyFigureIsMinimalDocument) {
  const std::string svg = render_svg(SvgFigure{});
  EXPECT_EQ(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("<g"), std::string::npos);
}

TEST(Svg, AtomicWrite) {
  const std::string path = (std::filesystem::temp_directory_path() / "euler_plane_atomic.txt").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  EXPECT_EQ(slurp(path), "second");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_THROW(write_atomic("/nonexistent-dir/x.svg", "x"), Error);
}

// --- the executable --------------------------------------------------------------------------

namespace {
int run_cli(const std::string& args) {
  const int status = std::system((std::string(EULER_PLANE_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path) << text;
  return path;
}
}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("zoo list"), 0);
  EXPECT_EQ(run_cli("run " + std::string(SCENE_DIR) + "/bestvina.scene"), 0);
  EXPECT_EQ(run_cli("run " + write_temp("ep_bad.scene", "euler-plane scene 1\n[group\n")), 2);
  EXPECT_EQ(run_cli("run " + write_temp("ep_tail.scene", "euler-plane scene 1\n[group]\nrecipe = torus_shear()\n"
                                                         "[method]\nname = signed-sum\nN = 1\n")),
            3);
  // a custom action that is not a representation: the relator fails
  EXPECT_EQ(run_cli("run " + write_temp("ep_rel.scene", "euler-plane scene 1\n[group]\ngenus = 1\n[primitives]\n"
                                                        "b = translation(x=1, y=0)\nr = rotation(angle=1)\n"
                                                        "[generators]\na1 = r\nb1 = b\n[method]\nname = lift\n")),
            4);
  EXPECT_EQ(run_cli("run --method nonsense " + std::string(SCENE_DIR) + "/bestvina.scene"), 2);
}

TEST(Cli, ReportFileIsDeterministic) {
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string scene = std::string(SCENE_DIR) + "/torus_shear.scene";
  ASSERT_EQ(run_cli("run " + scene + " --report " + dir + "/ep_r1.json --svg " + dir + "/ep_f1.svg"), 0);
  ASSERT_EQ(run_cli("run " + scene + " --report " + dir + "/ep_r2.json --svg " + dir + "/ep_f2.svg"), 0);
  const auto body = [](const std::string& p) { return nlohmann::json::parse(slurp(p))["body"].dump(); };
  EXPECT_EQ(body(dir + "/ep_r1.json"), body(dir + "/ep_r2.json"));
  EXPECT_EQ(slurp(dir + "/ep_f1.svg"), slurp(dir + "/ep_f2.svg"));
}
