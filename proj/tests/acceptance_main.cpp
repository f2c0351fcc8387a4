#include <cstdio>

#include "sqss/claims.hpp"

// Runs the full quantitative validation suite and prints one verdict line
// per item, then a summary. Exit status 0 only when everything passed.
int main() {
    const sqss::Checklist list = sqss::run_claim_suite(42);

    int passed = 0;
    for (const sqss::ChecklistItem& item : list.items) {
        if (item.pass) ++passed;
        std::printf("[%s] %2d %-28s expected: %s | observed: %s\n",
                    item.pass ? "PASS" : "FAIL", item.id, item.name.c_str(),
                    item.expected.c_str(), item.observed.c_str());
    }
    std::printf("%d/%zu passed (seed %llu)\n", passed, list.items.size(),
                static_cast<unsigned long long>(list.seed));
    return list.all_pass ? 0 : 1;
}
