// A sweep over the decision multiple m0 with analytic values only, written
// as CSV to stdout.

#include <iostream>

#include "aud/aud.hpp"

int main() {
  using namespace aud;
  experiments::SweepSpec spec;
  spec.name = "m0-analytic";
  spec.parameter = experiments::SweepParameter::m0;
  spec.grid = {1, 2, 3, 5, 10, 20, 50};
  spec.decisions = {DecisionKind::periodic};
  spec.services = {LawKind::exponential, LawKind::deterministic};
  spec.estimators = experiments::Estimators::analytic;
  experiments::write_csv(std::cout, experiments::sweep(spec));
}
