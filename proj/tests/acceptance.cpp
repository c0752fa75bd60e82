#include <cstdio>

#include "sgcurv/verify.hpp"

int main() {
    const sgcurv::VerifyResult r = sgcurv::run_verify({});
    for (const auto& c : r.criteria) {
        std::printf("%s %s %s (%zu/%zu checks, %.2f s)\n", c.pass ? "PASS" : "FAIL",
                    c.id > 0 ? ("criterion " + std::to_string(c.id)).c_str() : "extra",
                    c.title.c_str(), c.checks - c.failed, c.checks, c.seconds);
        for (const auto& k : r.checks)
            if (k.block == c.tag && !k.pass)
                std::printf("    failed: %s computed %.10g expected %s tol %.3g\n",
                            k.label.c_str(), k.computed,
                            k.expected ? std::to_string(*k.expected).c_str() : "<= tol", k.tol);
    }
    return r.all_pass() ? 0 : 1;
}
