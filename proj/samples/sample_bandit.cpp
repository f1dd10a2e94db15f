// KL-UCB against UCB1 on two Bernoulli arms, with paired rewards.

#include <cstdio>

#include "infobounds/bandit_sim.hpp"

using namespace infobounds;

int main() {
    BanditConfig cfg;
    cfg.arms = {ArmSchedule::constant(0.1), ArmSchedule::constant(0.2)};
    cfg.horizon = 10000;
    cfg.replications = 100;
    cfg.checkpoint_every = 2000;
    cfg.seed = 3;

    for (PolicyKind k : {PolicyKind::KLUCB, PolicyKind::HoeffdingUCB}) {
        cfg.policy.kind = k;
        const BanditSummary s = run_policy(cfg);
        std::printf("%s\n", s.policy.c_str());
        for (std::size_t i = 0; i < s.checkpoints.size(); ++i)
            std::printf("  t=%-6llu regret %8.2f +- %.2f\n", static_cast<unsigned long long>(s.checkpoints[i]),
                        s.mean_regret[i], s.std_error[i]);
    }
}
