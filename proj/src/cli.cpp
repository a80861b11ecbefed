#include "relatent/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "relatent/analytics.hpp"
#include "relatent/artifact_io.hpp"
#include "relatent/error.hpp"
#include "relatent/explain.hpp"

namespace relatent {

namespace fs = std::filesystem;

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::generate:
      return "generate";
    case Command::learn:
      return "learn";
    case Command::explain:
      return "explain";
    case Command::analyze:
      return "analyze";
    case Command::sweep:
      return "sweep";
  }
  return "?";
}

bool uses_kb(Command c) { return c != Command::generate; }

std::string join_numbers(const auto& values) {
  std::string s;
  for (const auto& v : values) {
    if (!s.empty()) s += ",";
    s += format_number(static_cast<double>(v));
  }
  return s;
}

// Inputs loaded once per run.
struct Inputs {
  std::string schema_text;
  std::string facts_text;
  std::string interps_text;
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  if (!uses_kb(cfg.command)) return in;
  in.schema_text = read_file(cfg.schema);
  in.facts_text = read_file(cfg.facts);
  in.interps_text = read_file(cfg.interps);
  return in;
}

// Hash over everything that determines the artifacts: the flag values and the
// input contents. File paths and the output directory are left out.
std::string config_hash(const RunConfig& cfg, const Inputs& in) {
  std::ostringstream c;
  c << "command=" << command_name(cfg.command) << "\nseed=" << cfg.seed.value_or(0);
  if (cfg.command == Command::generate) {
    const SyntheticSpec& s = cfg.synthetic;
    c << "\nprofessors=" << s.professors << "\nstudents=" << s.students << "\ncourses=" << s.courses
      << "\nfaculty_rate=" << format_number(s.faculty_rate) << "\nadvise_rate=" << format_number(s.advise_rate)
      << "\nta_rate=" << format_number(s.ta_rate) << "\nmax_courses=" << s.max_courses
      << "\nnoise=" << format_number(s.label_noise);
  } else {
    c << "\ndepths=" << join_numbers(cfg.depths) << "\nk=" << cfg.k.describe()
      << "\nmax_fanout=" << (cfg.max_fanout ? std::to_string(*cfg.max_fanout) : "none");
    if (cfg.command == Command::sweep) {
      c << "\nalphas=" << join_numbers(cfg.alphas);
    } else {
      c << "\nalpha=" << format_number(cfg.alpha.value_or(1.0));
    }
    if (cfg.command == Command::explain) c << "\ntheta=" << format_number(cfg.theta);
    std::uint64_t h = fnv1a(in.schema_text);
    h = fnv1a(in.facts_text, h);
    h = fnv1a(in.interps_text, h);
    c << "\ninputs=" << hex64(h);
  }
  return hex64(fnv1a(c.str()));
}

void write_artifact(const fs::path& path, std::string_view content, std::ostream& out) {
  write_atomic(path, content);
  out << "wrote " << path.string() << "\n";
}

std::string candidate_record(const CandidateRecord& r) {
  nlohmann::ordered_json j;
  j["record"] = "candidate";
  j["index"] = r.index;
  j["object_set"] = r.object_set;
  j["interpretation"] = r.interpretation;
  j["depth"] = r.depth;
  j["clusters"] = r.cluster_count;
  j["max_ari"] = r.max_ari ? nlohmann::ordered_json(*r.max_ari) : nlohmann::ordered_json(nullptr);
  j["accepted"] = r.accepted;
  return j.dump() + "\n";
}

std::string predicate_record(const LatentPredicate& p) {
  nlohmann::ordered_json j;
  j["record"] = "predicate";
  j["predicate"] = p.name;
  j["kind"] = p.kind == TargetKind::entity_type ? "unary" : "binary";
  j["target"] = p.target;
  j["object_set"] = p.provenance.object_set;
  j["interpretation"] = p.provenance.interpretation.name();
  j["depth"] = p.provenance.depth;
  j["cluster"] = p.provenance.cluster_index;
  j["groundings"] = p.members.size();
  return j.dump() + "\n";
}

struct Learned {
  KnowledgeBase kb;
  std::vector<SimilarityInterpretation> interps;
  LatentRepresentation rep;
};

LearnOptions learn_options(const RunConfig& cfg) {
  LearnOptions opts;
  opts.tree.max_fanout = cfg.max_fanout;
  return opts;
}

Learned learn(const RunConfig& cfg, const Inputs& in) {
  KnowledgeBase kb = KnowledgeBase::parse(in.schema_text, in.facts_text);
  auto interps = parse_interpretations(in.interps_text);
  auto rep = learn_latent(kb, interps, cfg.depths, *cfg.alpha, cfg.k, *cfg.seed, learn_options(cfg));
  return {std::move(kb), std::move(interps), std::move(rep)};
}

std::string clustering_file_name(const Clustering& c) {
  return std::string("clustering_") + (c.provenance.kind == TargetKind::entity_type ? "e_" : "r_") +
         c.provenance.target + "_" + c.provenance.interpretation + "_" + std::to_string(c.provenance.depth) + ".csv";
}

void run_generate(const RunConfig& cfg, const Provenance& prov, std::ostream& out) {
  SyntheticSpec spec = cfg.synthetic;
  spec.seed = *cfg.seed;
  const SyntheticKb kb = generate_synthetic(spec);
  write_artifact(cfg.out / "kb.schema", prov.comment_header('%') + kb.schema, out);
  write_artifact(cfg.out / "kb.facts", prov.comment_header('%') + kb.facts, out);
}

void run_learn(const RunConfig& cfg, const Inputs& in, const Provenance& prov, std::ostream& out) {
  const Learned l = learn(cfg, in);
  const KnowledgeBase latent = export_latent_kb(l.kb, l.rep);
  write_artifact(cfg.out / "latent.schema", prov.comment_header('%') + latent.schema().serialize(), out);
  write_artifact(cfg.out / "latent.facts", prov.comment_header('%') + latent.serialize_facts(), out);
  std::string log = prov.json_header();
  for (const auto& r : l.rep.log) log += candidate_record(r);
  for (const auto& p : l.rep.predicates) log += predicate_record(p);
  write_artifact(cfg.out / "learn_log.jsonl", log, out);
  for (const auto& c : l.rep.accepted) {
    write_artifact(cfg.out / clustering_file_name(c), clustering_csv(c, prov.comment_header('#')), out);
  }
  out << l.rep.predicates.size() << " latent predicates from " << l.rep.accepted.size() << " of " << l.rep.log.size()
      << " candidate clusterings\n";
}

void run_explain(const RunConfig& cfg, const Inputs& in, const Provenance& prov, std::ostream& out) {
  const Learned l = learn(cfg, in);
  std::string text = prov.comment_header('#');
  std::string records = prov.json_header();
  for (const auto& p : l.rep.predicates) {
    const Explanation e = explain_feature(l.kb, p, cfg.theta, p.provenance.depth, learn_options(cfg).tree);
    const std::string block = render_explanation(e);
    text += block;
    records += explanation_records(e);
    if (cfg.print) out << block;
  }
  write_artifact(cfg.out / "explanations.txt", text, out);
  write_artifact(cfg.out / "explanations.jsonl", records, out);
}

void run_analyze(const RunConfig& cfg, const Inputs& in, const Provenance& prov, std::ostream& out) {
  const Learned l = learn(cfg, in);
  const KnowledgeBase latent = export_latent_kb(l.kb, l.rep);
  const auto rows = diagnostics_table(l.kb, latent);
  write_artifact(cfg.out / "diagnostics.csv", diagnostics_csv(rows, prov.comment_header('#')), out);
}

void run_sweep(const RunConfig& cfg, const Inputs& in, const Provenance& prov, std::ostream& out) {
  const KnowledgeBase kb = KnowledgeBase::parse(in.schema_text, in.facts_text);
  const auto interps = parse_interpretations(in.interps_text);
  SweepOptions opts;
  opts.learn = learn_options(cfg);
  const auto rows = redundancy_sweep(kb, interps, cfg.depths, cfg.alphas, cfg.k, *cfg.seed, opts);
  write_artifact(cfg.out / "sweep.csv", sweep_csv(rows, prov.comment_header('#')), out);
}

}  // namespace

void RunConfig::validate() const {
  if (!seed) throw ConfigError("--seed is required");
  if (out.empty()) throw ConfigError("--out is required");
  if (command == Command::generate) {
    synthetic.validate();
    return;
  }
  if (schema.empty() || facts.empty()) throw ConfigError("--schema and --facts are required");
  if (interps.empty()) throw ConfigError("--interps is required");
  if (depths.empty()) throw ConfigError("--depths is required");
  if (!k.fixed && !k.automatic) throw ConfigError("one of --k or --auto-k is required");
  if (k.fixed && k.automatic) throw ConfigError("--k and --auto-k are mutually exclusive");
  if (k.fixed && *k.fixed == 0) throw ConfigError("--k must be positive");
  if (!(theta >= 0.0)) throw ConfigError("--theta must be >= 0");
  auto check_alpha = [](double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha values must lie in [0, 1]");
  };
  if (command == Command::sweep) {
    if (alphas.empty()) throw ConfigError("--alphas needs at least one value");
    std::for_each(alphas.begin(), alphas.end(), check_alpha);
  } else {
    if (!alpha) throw ConfigError("--alpha is required");
    check_alpha(*alpha);
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const Inputs in = load_inputs(cfg);
    const Provenance prov{command_name(cfg.command), *cfg.seed, config_hash(cfg, in)};
    fs::create_directories(cfg.out);
    switch (cfg.command) {
      case Command::generate:
        run_generate(cfg, prov, out);
        break;
      case Command::learn:
        run_learn(cfg, in, prov, out);
        break;
      case Command::explain:
        run_explain(cfg, in, prov, out);
        break;
      case Command::analyze:
        run_analyze(cfg, in, prov, out);
        break;
      case Command::sweep:
        run_sweep(cfg, in, prov, out);
        break;
    }
    return exit_ok;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse_error;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_runtime_error;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relational latent features from neighbourhood-tree clustering", "relatent"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t fanout = 0;
  double alpha = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed recorded in every artifact")->required();
    sub->add_option("--out", cfg.out, "Output directory")->required();
  };
  auto add_pipeline = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--schema", cfg.schema, "Schema file")->required()->check(CLI::ExistingFile);
    sub->add_option("--facts", cfg.facts, "Fact file")->required()->check(CLI::ExistingFile);
    sub->add_option("--interps", cfg.interps, "Similarity interpretation file")->required()->check(CLI::ExistingFile);
    sub->add_option("--depths", cfg.depths, "Neighbourhood tree depths, e.g. 1,2")->required()->delimiter(',');
    auto* k_opt = sub->add_option("--k", k, "Clusters per clustering");
    auto* auto_opt = sub->add_flag("--auto-k", cfg.k.automatic, "Pick k by silhouette over [2, ceil(sqrt(n))]");
    k_opt->excludes(auto_opt);
    sub->add_option("--max-fanout", fanout, "Cap on children expanded per tree vertex");
  };

  auto* gen = app.add_subcommand("generate", "Write a synthetic professors/students/courses knowledge base");
  add_common(gen);
  SyntheticSpec& s = cfg.synthetic;
  gen->add_option("--professors", s.professors, "Number of professors")->capture_default_str();
  gen->add_option("--students", s.students, "Number of students")->capture_default_str();
  gen->add_option("--courses", s.courses, "Number of courses")->capture_default_str();
  gen->add_option("--faculty-rate", s.faculty_rate, "Share of professors holding position(faculty)")->capture_default_str();
  gen->add_option("--advise-rate", s.advise_rate, "Probability that a student has an advisor")->capture_default_str();
  gen->add_option("--ta-rate", s.ta_rate, "Probability that a student teaches a course")->capture_default_str();
  gen->add_option("--max-courses", s.max_courses, "Maximum courses per professor")->capture_default_str();
  gen->add_option("--noise", s.label_noise, "Label flip probability")->capture_default_str();

  auto* learn_cmd = app.add_subcommand("learn", "Learn latent predicates");
  add_pipeline(learn_cmd);
  learn_cmd->add_option("--alpha", alpha, "Redundancy threshold on ARI")->required();

  auto* explain_cmd = app.add_subcommand("explain", "Learn latent predicates and explain each one");
  add_pipeline(explain_cmd);
  explain_cmd->add_option("--alpha", alpha, "Redundancy threshold on ARI")->required();
  explain_cmd->add_option("--theta", cfg.theta, "Confidence threshold")->capture_default_str();
  explain_cmd->add_flag("--print", cfg.print, "Also print explanations to stdout");

  auto* analyze_cmd = app.add_subcommand("analyze", "Label entropy and sparsity of original and latent predicates");
  add_pipeline(analyze_cmd);
  analyze_cmd->add_option("--alpha", alpha, "Redundancy threshold on ARI")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Accuracy and feature counts over a range of alpha values");
  add_pipeline(sweep_cmd);
  sweep_cmd->add_option("--alphas", cfg.alphas, "Alpha values")->delimiter(',')->capture_default_str();

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  }

  const std::pair<CLI::App*, Command> commands[] = {{gen, Command::generate},
                                                    {learn_cmd, Command::learn},
                                                    {explain_cmd, Command::explain},
                                                    {analyze_cmd, Command::analyze},
                                                    {sweep_cmd, Command::sweep}};
  for (const auto& [sub, command] : commands) {
    if (!sub->parsed()) continue;
    cfg.command = command;
    cfg.seed = seed;
    if (command != Command::generate) {
      if (sub->get_option("--k")->count() > 0) cfg.k.fixed = k;
      if (sub->get_option("--max-fanout")->count() > 0) cfg.max_fanout = fanout;
    }
    if (command != Command::generate && command != Command::sweep) cfg.alpha = alpha;
  }
  return run(cfg, out, err);
}

}  // namespace relatent
