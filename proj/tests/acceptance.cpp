// Acceptance suite: one line per criterion. `--negative-control` runs a fast
// subset with the halved dissipator convention and succeeds only if it fails.
#include "tcrelax/diagnostics.hpp"
#include "tcrelax/verify.hpp"

#include <cstring>
#include <iostream>

using namespace tcrelax;

int main(int argc, char** argv) {
    diag::set_sink({});
    verify::Options opts;
    const bool negative = argc > 1 && std::strcmp(argv[1], "--negative-control") == 0;
    if (negative) {
        opts.fault = verify::Fault::half_convention;
        opts.only = {1, 2, 3};
    }
    opts.progress = [](const verify::CheckResult& r) {
        std::cout << verify::format_report(verify::Report{{r}}) << std::flush;
    };
    const verify::Report report = verify::run_suite(opts);
    std::size_t passed = 0;
    for (const auto& c : report.checks) passed += c.passed ? 1 : 0;
    std::cout << passed << "/" << report.checks.size() << " criteria passed\n";
    if (negative) {
        const bool caught = !report.all_passed();
        std::cout << (caught ? "negative control: the wrong convention was rejected\n"
                             : "negative control: the wrong convention was NOT detected\n");
        return caught ? 0 : 1;
    }
    return report.all_passed() ? 0 : 1;
}
