// Acceptance criteria 1-12, one pass/fail line each. Tolerances are pinned
// inside the criterion functions. DSY_ACCEPTANCE_SCALE shrinks replica
// counts for quick local runs; ctest uses the full scale.
#include <cstdlib>
#include <iostream>
#include <string>

#include "dsy/experiment/acceptance.hpp"

int main() {
    dsy::experiment::acceptance_options opt;
    if (const char* s = std::getenv("DSY_ACCEPTANCE_SCALE")) opt.replicas_scale = std::stod(s);
    std::vector<int> ids(dsy::experiment::criteria().size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i) + 1;
    int failed = 0;
    for (int id : ids) {
        const auto r = dsy::experiment::run_criteria(opt, {id}).front();
        std::cout << dsy::experiment::summary_line(r) << std::endl;
        if (!r.passed()) ++failed;
    }
    std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed\n";
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
