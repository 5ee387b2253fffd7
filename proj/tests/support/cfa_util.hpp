#pragma once

#include <set>
#include <string>

#include "fjobf/cfa.hpp"
#include "fjobf/target_ast.hpp"

namespace fjobf::testing {

std::set<std::string> displays(const target::ProgramIndex& idx, const std::set<int>& ids);

// Points-to set of `name` declared in the frame of function or method `owner`
// (by display name), contexts merged, as display names.
std::set<std::string> pts(const target::ProgramIndex& idx, const cfa::AnalysisResult& r, const std::string& owner,
                          const std::string& name);

// The same per context, keyed by the context display.
std::map<std::string, std::set<std::string>> pts_by_context(const target::ProgramIndex& idx,
                                                            const cfa::AnalysisResult& r, const std::string& owner,
                                                            const std::string& name);

// The prelude followed by `body`.
target::TargetProgram with_prelude(const std::string& body);

}  // namespace fjobf::testing
