#include <zdadapt/derivative.hpp>

#include <stdexcept>

namespace zdadapt {
namespace {

Coordinate P(int j, int v) { return {'p', j, v}; }
Coordinate Q(int j, int v) { return {'q', j, v}; }

}  // namespace

const std::vector<CornerCondition>& zero_condition_list(int ell) {
  static const std::vector<CornerCondition> q1 = {
      {Q(0, 0), Q(3, 0), Q(4, 0)},
      {P(0, 0), P(4, 0), Q(0, 0), Q(4, 0)},
      {P(0, 0), Q(2, 0), Q(3, 0), Q(4, 0)},
      {P(2, 0), Q(0, 0), Q(2, 0), Q(4, 0)},
      {P(4, 0), Q(0, 0), Q(2, 0), Q(3, 0)},
      {P(0, 0), P(2, 0), Q(0, 1), Q(2, 0), Q(4, 0)},
      {P(0, 0), P(4, 0), Q(0, 1), Q(2, 0), Q(3, 0)},
      {P(2, 0), P(4, 0), Q(0, 0), Q(2, 0), Q(4, 1)},
      {P(0, 0), P(2, 0), P(4, 0), Q(0, 1), Q(2, 0), Q(4, 1)},
      {P(0, 1), P(2, 0), P(3, 1), Q(0, 0), Q(2, 0), Q(3, 1)},
      {P(0, 0), P(2, 0), P(3, 1), Q(0, 1), Q(2, 0), Q(3, 1)},
  };
  static const std::vector<CornerCondition> q2 = {
      {Q(0, 0), Q(3, 0), Q(4, 0)},
      {P(0, 1), P(1, 1), Q(0, 1), Q(1, 1)},
      {P(0, 0), P(4, 0), Q(0, 0), Q(4, 0)},
      {P(0, 1), Q(1, 0), Q(3, 0), Q(4, 0)},
  };
  static const std::vector<CornerCondition> q3 = {
      {Q(0, 1), Q(1, 1), Q(2, 1)},
      {P(0, 1), P(1, 1), Q(0, 1), Q(1, 1)},
      {P(0, 0), P(4, 0), Q(0, 0), Q(4, 0)},
      {P(0, 0), Q(1, 1), Q(2, 1), Q(4, 1)},
      {P(0, 0), P(4, 0), Q(0, 0), Q(1, 0), Q(2, 0)},
  };
  static const std::vector<CornerCondition> q4 = {
      {Q(0, 1), Q(1, 1), Q(2, 1)},
      {P(0, 1), P(1, 1), Q(0, 1), Q(1, 1)},
      {P(0, 1), Q(1, 1), Q(2, 1), Q(3, 1)},
      {P(1, 1), Q(0, 1), Q(2, 1), Q(3, 1)},
      {P(3, 1), Q(0, 1), Q(1, 1), Q(3, 1)},
      {P(0, 1), P(3, 1), Q(0, 0), Q(1, 1), Q(3, 1)},
      {P(1, 1), P(3, 1), Q(0, 1), Q(1, 0), Q(3, 1)},
      {P(0, 1), P(1, 1), P(3, 1), Q(1, 0), Q(2, 1), Q(3, 1)},
      {P(0, 1), P(2, 0), P(3, 1), Q(0, 0), Q(2, 1), Q(3, 1)},
  };
  switch (ell) {
    case 1: return q1;
    case 2: return q2;
    case 3: return q3;
    case 4: return q4;
    default: throw std::out_of_range("zero condition index must be in 1..4");
  }
}

const std::vector<std::pair<RelayTag, CornerCondition>>& relay_condition_list() {
  static const std::vector<std::pair<RelayTag, CornerCondition>> list = {
      {RelayTag::R1, {Q(0, 1), Q(1, 1), Q(2, 1)}},
      {RelayTag::R2, {P(0, 1), P(1, 1), Q(0, 1), Q(1, 1)}},
      {RelayTag::R3, {P(0, 0), Q(1, 1), Q(2, 1), Q(3, 0), Q(4, 1)}},
      {RelayTag::R4, {P(0, 1), Q(1, 1), Q(2, 1), Q(3, 1), Q(4, 0)}},
      {RelayTag::R5, {Q(1, 1), Q(2, 1), Q(3, 1), Q(4, 1)}},
  };
  return list;
}

std::string to_string(RelayTag tag) {
  switch (tag) {
    case RelayTag::R1: return "R1";
    case RelayTag::R2: return "R2";
    case RelayTag::R3: return "R3";
    case RelayTag::R4: return "R4";
    case RelayTag::R5: return "R5";
  }
  return "?";
}

std::string to_string(TerminalTag tag) {
  switch (tag) {
    case TerminalTag::T1: return "T1";
    case TerminalTag::T2: return "T2";
    case TerminalTag::Other: return "OTHER";
  }
  return "?";
}

}  // namespace zdadapt
