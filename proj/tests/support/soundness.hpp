#pragma once

#include <string>
#include <vector>

#include "fjobf/target_ast.hpp"
#include "report.hpp"

namespace fjobf::testing {

struct SoundnessReport {
  std::size_t bindings = 0;  // closure values observed
  std::size_t calls = 0;     // dynamic call edges observed
  std::vector<std::string> misses;
};

// Runs `inputs` on the instrumented interpreter and checks every observed
// closure binding against the 0-CFA store and every call against the
// reconstructed whole-program graph.
SoundnessReport check_soundness(const target::TargetProgram& p, const std::vector<report::Sequence>& inputs,
                                std::uint64_t budget = 200000);

}  // namespace fjobf::testing
