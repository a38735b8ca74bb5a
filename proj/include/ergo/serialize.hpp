#pragma once

#include <string>

#include "ergo/actions.hpp"
#include "ergo/groups.hpp"
#include "ergo/koopman.hpp"
#include "ergo/spaces.hpp"

namespace ergo {

// Text formats, all line-based and newline-terminated.  Parsers skip blank
// lines and throw ParseError with the offending content.
//
//   rational   p/q (or a bare integer)
//   element    canonical literal: finite index, free word "a1 a2'" with "e"
//              for the identity, product "(<left>|<right>)"
//   measure    one "<element-literal> <p/q>" line per support element
//   space      "atoms=N" then one "index weight [label]" line per atom;
//              the label runs to the end of the line
//   partition  one line of space-separated block ids, one per atom
//   group      "group free <rank>" | "group product" followed by the two
//              factor blocks | "group finite <order>" followed by a
//              "generators <indices...>" line and <order> table rows
//              ("group cyclic <m>" is accepted on input)
//   automorphism  cycle notation "(0 1 2)(3 4)", fixed points omitted,
//              "()" for the identity
//   action     "action", group block, space block, one automorphism line
//              per generator
//   pair       "pair", the shared space block, then two action blocks
//              without their own space blocks
//   ring element  one "<element-literal> <re> <im>" line per support
//              element, coefficients as decimal doubles

std::string rational_to_text(const Rational& value);
Rational rational_from_text(const std::string& text);

GroupElement element_from_literal(const GroupPtr& group, const std::string& text);

std::string group_to_text(const GroupPtr& group);
GroupPtr group_from_text(const std::string& text);

std::string measure_to_text(const FiniteSupportMeasure& w);
FiniteSupportMeasure measure_from_text(const GroupPtr& group, const std::string& text);

std::string space_to_text(const FiniteProbabilitySpace& space);
FiniteProbabilitySpace space_from_text(const std::string& text);

std::string partition_to_text(const Partition& partition);
Partition partition_from_text(const std::string& text);

std::string automorphism_to_cycles(const Automorphism& f);
Automorphism automorphism_from_cycles(std::size_t size, const std::string& text);

std::string action_to_text(const PmpAction& action);
PmpAction action_from_text(const std::string& text);

std::string pair_to_text(const CommutingPair& pair);
CommutingPair pair_from_text(const std::string& text);

std::string ring_element_to_text(const GroupRingElement& phi);
GroupRingElement ring_element_from_text(const GroupPtr& group, const std::string& text);

}  // namespace ergo
