// Executes the constructed negative runs and prints p's value against her share.

#include "bidfair/bidfair.hpp"

#include <iostream>

int main() {
  using namespace bidfair;
  const ScriptedRun runs[] = {gen_altruistic_negative(1), gen_altruistic_negative(2), gen_altruistic_negative(3),
                              gen_original_negative(1),   gen_original_negative(2),   gen_modified_negative(2),
                              gen_xos_hard(16, 2)};
  for (const auto& run : runs) {
    const auto out = execute(run);
    std::cout << run.name << ": agents " << run.instance.agent_count() << ", items " << run.instance.items().size()
              << ", p value " << format_rational(out.p_value) << ", " << run.share_kind << " "
              << format_rational(run.share) << ", ratio " << format_rational(out.p_value / run.share)
              << (out.matches ? "" : "  (unexpected)") << "\n";
  }
}
