#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "relatent/artifact_io.hpp"
#include "relatent/cli.hpp"
#include "relatent/kbase.hpp"
#include "support.hpp"

using namespace relatent;
namespace fs = std::filesystem;

namespace {

struct Workdir {
  fs::path root;
  explicit Workdir(const std::string& name) : root(fs::temp_directory_path() / ("relatent_test_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workdir() { fs::remove_all(root); }
  std::string put(const std::string& file, const std::string& text) const {
    write_atomic(root / file, text);
    return (root / file).string();
  }
  std::string path(const std::string& p) const { return (root / p).string(); }
};

int call(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "relatent");
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string header_hash(const std::string& s) {
  const auto line = first_line(s);
  const auto at = line.find("config");
  return line.substr(at + 7, 16);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("learn on the toy knowledge base") {
    Workdir w("learn");
    const auto schema = w.put("kb.schema", testing::kProfessorsSchema);
    const auto facts = w.put("kb.facts", testing::kProfessorsFacts);
    const auto interps = w.put("interps.txt", "interp attr 1 0 0 0 0\ninterp edges 0 0 0 0 1\n");
    const auto out = w.path("out");
    REQUIRE(call({"learn", "--schema", schema, "--facts", facts, "--interps", interps, "--depths", "1,2", "--k", "2",
                  "--alpha", "0.9", "--seed", "3", "--out", out}) == exit_ok);
    const std::string lschema = read_file(fs::path(out) / "latent.schema");
    const std::string lfacts = read_file(fs::path(out) / "latent.facts");
    const std::string log = read_file(fs::path(out) / "learn_log.jsonl");
    auto kb = KnowledgeBase::parse(lschema, lfacts);
    CHECK(kb.entity_count() == 12);
    CHECK(first_line(lschema).rfind("% relatent ", 0) == 0);
    CHECK(log.rfind("{\"relatent\":", 0) == 0);
    // One hash per run, shared by every artifact.
    const std::string h = header_hash(lschema);
    CHECK(header_hash(lfacts) == h);
    CHECK(log.find("\"config\":\"" + h + "\"") != std::string::npos);
    for (const auto& entry : fs::directory_iterator(out)) {
      CHECK(read_file(entry.path()).find(h) != std::string::npos);
      CHECK(entry.path().extension() != ".tmp");
    }
  }

  TEST_CASE("explain prints the relevant elements") {
    Workdir w("explain");
    const auto schema = w.put("kb.schema", testing::kProfessorsSchema);
    const auto facts = w.put("kb.facts", testing::kProfessorsFacts);
    const auto interps = w.put("interps.txt", "interp edges 0 0 0 0 1\n");
    std::string printed;
    REQUIRE(call({"explain", "--schema", schema, "--facts", facts, "--interps", interps, "--depths", "1", "--k", "2",
                  "--alpha", "1", "--seed", "1", "--theta", "0.3", "--print", "--out", w.path("out")},
                 &printed) == exit_ok);
    // The three professors form the first Person cluster.
    const auto at = printed.find("latent_person_edges_1_c0 ");
    REQUIRE(at != std::string::npos);
    const auto block = printed.substr(at, printed.find("latent_", at + 1) - at);
    CHECK(block.find("edge advisedBy  mu 0.56  sigma 0.16") != std::string::npos);
    CHECK(block.find("edge teaches") != std::string::npos);
    CHECK(block.find("member") == std::string::npos);
    const auto text = read_file(fs::path(w.path("out")) / "explanations.txt");
    CHECK(text.find("[*] edge advisedBy") != std::string::npos);
    CHECK(text.find("[*] edge teaches") != std::string::npos);
    CHECK(fs::exists(fs::path(w.path("out")) / "explanations.jsonl"));
  }

  TEST_CASE("reruns are byte-identical") {
    Workdir w("rerun");
    REQUIRE(call({"generate", "--seed", "5", "--out", w.path("gen"), "--professors", "5", "--students", "12"}) == exit_ok);
    const auto interps = w.put("interps.txt", "interp attr 1 0 0 0 0\ninterp mix 1 1 1 1 1\n");
    for (const char* out : {"a", "b"}) {
      REQUIRE(call({"learn", "--schema", w.path("gen/kb.schema"), "--facts", w.path("gen/kb.facts"), "--interps",
                    interps, "--depths", "1,2", "--auto-k", "--alpha", "0.7", "--seed", "5", "--out", w.path(out)}) == exit_ok);
    }
    for (const auto& entry : fs::directory_iterator(w.path("a"))) {
      CHECK(read_file(entry.path()) == read_file(fs::path(w.path("b")) / entry.path().filename()));
    }
  }

  TEST_CASE("exit codes") {
    Workdir w("codes");
    const auto schema = w.put("kb.schema", testing::kProfessorsSchema);
    const auto facts = w.put("kb.facts", testing::kProfessorsFacts);
    const auto bad_facts = w.put("bad.facts", "person(x).\nadvisedBy(x).\n");
    const auto interps = w.put("interps.txt", "interp attr 1 0 0 0 0\n");
    const std::vector<std::string> base{"--schema", schema, "--interps", interps, "--depths", "1", "--k", "2",
                                        "--seed", "1", "--out", w.path("o")};
    auto with = [&](std::vector<std::string> extra) {
      std::vector<std::string> a{"learn"};
      a.insert(a.end(), base.begin(), base.end());
      a.insert(a.end(), extra.begin(), extra.end());
      return a;
    };
    std::string err;
    CHECK(call(with({"--facts", bad_facts, "--alpha", "1"}), nullptr, &err) == exit_parse_error);
    CHECK(err.find("line 2") != std::string::npos);
    CHECK(call(with({"--facts", facts, "--alpha", "1.5"})) == exit_config_error);
    CHECK(call(with({"--facts", facts})) == exit_config_error);
    CHECK(call(with({"--facts", facts, "--alpha", "1", "--bogus"})) == exit_config_error);
    CHECK(call(with({"--facts", facts, "--alpha", "1", "--auto-k"})) == exit_config_error);
    CHECK(call({"learn", "--schema", schema, "--facts", facts, "--interps", interps, "--alpha", "1", "--k", "2",
                "--seed", "1", "--out", w.path("o")}) == exit_config_error);
    CHECK(call({"frobnicate"}) == exit_config_error);
    CHECK(call({"generate", "--seed", "1", "--out", w.path("g"), "--noise", "1"}) == exit_config_error);
    CHECK(call({"--help"}) == exit_ok);
  }

  TEST_CASE("analyze and sweep outputs") {
    Workdir w("analyze");
    REQUIRE(call({"generate", "--seed", "2", "--out", w.path("gen"), "--professors", "5", "--students", "15"}) == exit_ok);
    const auto interps = w.put("interps.txt", "interp attr 1 0 0 0 0\ninterp attr2 1 0.05 0 0 0\n");
    const std::vector<std::string> common{"--schema", w.path("gen/kb.schema"), "--facts", w.path("gen/kb.facts"),
                                          "--interps", interps, "--depths", "1", "--k", "2", "--seed", "2"};
    auto args = [&](const char* cmd, std::vector<std::string> extra) {
      std::vector<std::string> a{cmd};
      a.insert(a.end(), common.begin(), common.end());
      a.insert(a.end(), extra.begin(), extra.end());
      return a;
    };
    REQUIRE(call(args("analyze", {"--alpha", "1", "--out", w.path("an")})) == exit_ok);
    const auto diag = read_file(fs::path(w.path("an")) / "diagnostics.csv");
    CHECK(diag.find("\npredicate,origin,groundings,entropy\n") != std::string::npos);
    CHECK(diag.find(",latent,") != std::string::npos);
    REQUIRE(call(args("sweep", {"--alphas", "0.9,0.5", "--out", w.path("sw")})) == exit_ok);
    const auto sweep = read_file(fs::path(w.path("sw")) / "sweep.csv");
    CHECK(sweep.find("\nalpha,features,facts,accuracy,feature_ratio,fact_ratio\n1,") != std::string::npos);
    // --alpha belongs to learn, not sweep.
    CHECK(call(args("sweep", {"--alpha", "0.5", "--out", w.path("sw")})) == exit_config_error);
  }
}
