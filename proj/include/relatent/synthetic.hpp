#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace relatent {

// Parameters of the professors/students/courses generator.
struct SyntheticSpec {
  std::size_t professors = 10;
  std::size_t students = 30;
  std::size_t courses = 8;
  double faculty_rate = 1.0;      // share of professors holding position(faculty)
  double advise_rate = 0.7;       // probability that a student has an advisor
  double ta_rate = 0.3;           // probability that a student teaches a course
  std::size_t max_courses = 2;    // courses taught per professor, drawn from [1, max_courses]
  double label_noise = 0.0;       // probability of flipping a person's label
  std::uint64_t seed = 1;

  // Throws ConfigError on counts < 1, rates outside [0,1] or noise outside [0,1).
  void validate() const;
};

struct SyntheticKb {
  std::string schema;
  std::string facts;
};

// Professors carry position and a publication count, advise students and teach
// courses; students carry phase and years and may also teach. Persons are
// labeled professor or student. Output depends only on the spec.
SyntheticKb generate_synthetic(const SyntheticSpec& spec);

}  // namespace relatent
