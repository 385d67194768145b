// Acceptance suite: one line per criterion, exit 0 iff all pass. The
// measurements come from the same invariant battery the CLI `check`
// command runs, with all tolerances pinned in core/src/battery.cpp.
#include <cstdio>
#include <string>
#include <vector>

#include "qse/battery.hpp"

namespace {

struct Criterion {
    const char* title;
    std::vector<std::string> prefixes;
};

bool matches(const std::string& name, const std::vector<std::string>& prefixes) {
    for (const auto& p : prefixes)
        if (name.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 energy conservation", {"energy_conservation."}},
        {"2 energy additivity + convergence", {"additivity."}},
        {"3 effective-Hamiltonian split", {"split."}},
        {"4 master equation + dissipator", {"master.", "dissipator."}},
        {"5 non-interacting limit", {"noninteracting."}},
        {"6 gauge behavior", {"gauge."}},
        {"7 closed-form exchange oracle", {"closedform."}},
        {"8 Schmidt-layer invariants", {"schmidt."}},
    };

    std::vector<qse::CheckItem> items;
    try {
        items = qse::run_check_battery();
    } catch (const qse::Error& e) {
        std::printf("FAIL battery aborted: %s\n", e.what());
        return 1;
    }

    bool all_ok = true;
    for (const auto& c : criteria) {
        bool ok = true;
        int covered = 0;
        std::string failing;
        for (const auto& item : items) {
            if (!matches(item.name, c.prefixes)) continue;
            ++covered;
            if (!item.pass) {
                ok = false;
                failing += " " + item.name;
            }
        }
        if (covered == 0) {
            ok = false;
            failing = " (no checks matched)";
        }
        std::printf("%s criterion %s (%d checks)%s\n", ok ? "PASS" : "FAIL",
                    c.title, covered, failing.c_str());
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
