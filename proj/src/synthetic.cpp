#include "relatent/synthetic.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "relatent/error.hpp"
#include "relatent/random.hpp"

namespace relatent {

namespace {

std::string padded(const char* prefix, std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::to_string(n == 0 ? 0 : n - 1).size();
  return prefix + std::string(width - digits.size(), '0') + digits;
}

void check_rate(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void SyntheticSpec::validate() const {
  if (professors < 1 || students < 1 || courses < 1) throw ConfigError("synthetic counts must be at least 1");
  if (max_courses < 1) throw ConfigError("max_courses must be at least 1");
  check_rate("faculty_rate", faculty_rate);
  check_rate("advise_rate", advise_rate);
  check_rate("ta_rate", ta_rate);
  if (!(label_noise >= 0.0 && label_noise < 1.0)) throw ConfigError("label noise must lie in [0, 1)");
}

SyntheticKb generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  SyntheticKb out;
  out.schema =
      "type Person.\n"
      "type Course.\n"
      "attribute position(Person, discrete).\n"
      "attribute publications(Person, numeric).\n"
      "attribute phase(Person, discrete).\n"
      "attribute years(Person, numeric).\n"
      "attribute level(Course, discrete).\n"
      "relation advisedBy(Person, Person).\n"
      "relation teaches(Person, Course).\n"
      "label Person.\n";

  std::vector<std::string> profs, studs, courses;
  for (std::size_t i = 0; i < spec.professors; ++i) profs.push_back(padded("prof", i, spec.professors));
  for (std::size_t i = 0; i < spec.students; ++i) studs.push_back(padded("stud", i, spec.students));
  for (std::size_t i = 0; i < spec.courses; ++i) courses.push_back(padded("course", i, spec.courses));

  std::ostringstream facts;
  for (const auto& p : profs) facts << "person(" << p << ").\n";
  for (const auto& s : studs) facts << "person(" << s << ").\n";
  for (const auto& c : courses) facts << "course(" << c << ").\n";

  for (const auto& c : courses) facts << "level(" << c << ", " << (rng.bernoulli(0.5) ? "basic" : "advanced") << ").\n";
  for (const auto& p : profs) {
    if (rng.bernoulli(spec.faculty_rate)) facts << "position(" << p << ", faculty).\n";
    facts << "publications(" << p << ", " << 5 + rng.below(56) << ").\n";
    const std::size_t n = 1 + rng.below(spec.max_courses);
    for (std::size_t k = 0; k < n; ++k) facts << "teaches(" << p << ", " << courses[rng.below(courses.size())] << ").\n";
  }
  for (const auto& s : studs) {
    const std::size_t years = 1 + rng.below(6);
    const char* phase = years <= 2 ? "pre_quals" : years <= 4 ? "post_quals" : "post_generals";
    facts << "phase(" << s << ", " << phase << ").\n";
    facts << "years(" << s << ", " << years << ").\n";
    if (rng.bernoulli(spec.advise_rate)) facts << "advisedBy(" << s << ", " << profs[rng.below(profs.size())] << ").\n";
    if (rng.bernoulli(spec.ta_rate)) facts << "teaches(" << s << ", " << courses[rng.below(courses.size())] << ").\n";
  }
  auto label = [&](const std::string& who, bool professor) {
    if (rng.bernoulli(spec.label_noise)) professor = !professor;
    facts << "label(" << who << ", " << (professor ? "professor" : "student") << ").\n";
  };
  for (const auto& p : profs) label(p, true);
  for (const auto& s : studs) label(s, false);

  out.facts = facts.str();
  return out;
}

}  // namespace relatent
