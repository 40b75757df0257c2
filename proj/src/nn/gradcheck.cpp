#include "kwcl/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "kwcl/util/rng.hpp"

namespace kwcl::nn {

namespace {

double eval(const LossBuilder& build) {
    Tape t;
    return t.value(build(t)).item();
}

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double lo = -1.0,
                     double hi = 1.0) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = util::uniform(rng, lo, hi);
    return t;
}

/// Uniform magnitude in [0.1, 1.0] with random sign: keeps relu inputs at
/// least 1e4 * eps away from the kink.
Tensor random_tensor_off_zero(std::vector<std::size_t> shape, std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    for (std::size_t i = 0; i < t.numel(); ++i) {
        double m = util::uniform(rng, 0.1, 1.0);
        t[i] = util::uniform01(rng) < 0.5 ? -m : m;
    }
    return t;
}

std::vector<std::int32_t> random_targets(std::size_t batch, std::size_t classes,
                                         std::mt19937_64& rng) {
    std::vector<std::int32_t> t(batch);
    for (auto& x : t) x = static_cast<std::int32_t>(util::bounded(rng, classes));
    return t;
}

} // namespace

double finite_diff_check(const LossBuilder& build, const std::vector<Parameter*>& params,
                         double eps) {
    for (Parameter* p : params) p->zero_grad();
    Tape tape;
    Tape::NodeId loss = build(tape);
    tape.backward(loss);

    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) {
        analytic.push_back(p->grad);
        p->zero_grad();
    }

    double max_rel = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter& p = *params[pi];
        for (std::size_t i = 0; i < p.value.numel(); ++i) {
            const double orig = p.value[i];
            p.value[i] = orig + eps;
            const double fp = eval(build);
            p.value[i] = orig - eps;
            const double fm = eval(build);
            p.value[i] = orig;
            const double numeric = (fp - fm) / (2.0 * eps);
            const double a = analytic[pi][i];
            const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
            max_rel = std::max(max_rel, std::abs(a - numeric) / denom);
        }
    }
    return max_rel;
}

std::vector<GradCheckCase> run_gradcheck_suite(std::size_t trials, std::uint64_t seed) {
    struct Case {
        std::string name;
        double tolerance;
        std::function<double(std::mt19937_64&)> run; // one trial -> max rel err
    };

    auto scalarize = [](Tape& t, Tape::NodeId out, const Tensor& weights) {
        return t.sum(t.mul(out, t.constant(weights)));
    };

    std::vector<Case> cases;

    cases.push_back({"embedding_lookup", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t V = 6, d = 4, B = 2, L = 3;
        Parameter table("table", random_tensor({V, d}, rng));
        IndexMatrix ids{B, L, {}};
        ids.ids.resize(B * L);
        for (auto& id : ids.ids) id = static_cast<std::int32_t>(util::bounded(rng, V));
        ids.ids[0] = 0; // exercise the frozen PAD row
        Tensor w = random_tensor({B, L, d}, rng);
        auto build = [&](Tape& t) {
            return scalarize(t, t.embedding_lookup(t.parameter(table), ids), w);
        };
        return finite_diff_check(build, {&table});
    }});

    cases.push_back({"conv1d", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 2, L = 6, d = 3, C = 4;
        const std::size_t k = 1 + util::bounded(rng, 3);
        Parameter input("input", random_tensor({B, L, d}, rng));
        Parameter kernels("kernels", random_tensor({C, k, d}, rng));
        Parameter bias("bias", random_tensor({C}, rng));
        Tensor w = random_tensor({B, L - k + 1, C}, rng);
        auto build = [&](Tape& t) {
            return scalarize(
                t, t.conv1d(t.parameter(input), t.parameter(kernels), t.parameter(bias)), w);
        };
        return finite_diff_check(build, {&input, &kernels, &bias});
    }});

    cases.push_back({"global_max_pool", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, T = 5, C = 4;
        Parameter input("input", random_tensor({B, T, C}, rng));
        std::vector<std::int32_t> valid(B);
        for (auto& v : valid) v = static_cast<std::int32_t>(1 + util::bounded(rng, T));
        Tensor w = random_tensor({B, C}, rng);
        auto build = [&](Tape& t) {
            return scalarize(t, t.global_max_pool(t.parameter(input), valid), w);
        };
        return finite_diff_check(build, {&input});
    }});

    cases.push_back({"linear", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, I = 4, O = 5;
        Parameter input("input", random_tensor({B, I}, rng));
        Parameter weight("weight", random_tensor({I, O}, rng));
        Parameter bias("bias", random_tensor({O}, rng));
        Tensor w = random_tensor({B, O}, rng);
        auto build = [&](Tape& t) {
            return scalarize(t, t.linear(t.parameter(input), t.parameter(weight), t.parameter(bias)),
                             w);
        };
        return finite_diff_check(build, {&input, &weight, &bias});
    }});

    cases.push_back({"relu", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, I = 6;
        Parameter input("input", random_tensor_off_zero({B, I}, rng));
        Tensor w = random_tensor({B, I}, rng);
        auto build = [&](Tape& t) { return scalarize(t, t.relu(t.parameter(input)), w); };
        return finite_diff_check(build, {&input});
    }});

    cases.push_back({"concat", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, Ia = 2, Ib = 4;
        Parameter a("a", random_tensor({B, Ia}, rng));
        Parameter b("b", random_tensor({B, Ib}, rng));
        Tensor w = random_tensor({B, Ia + Ib}, rng);
        auto build = [&](Tape& t) {
            return scalarize(t, t.concat(t.parameter(a), t.parameter(b)), w);
        };
        return finite_diff_check(build, {&a, &b});
    }});

    cases.push_back({"mul", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, I = 4;
        Parameter a("a", random_tensor({B, I}, rng));
        Parameter b("b", random_tensor({B, I}, rng));
        Tensor w = random_tensor({B, I}, rng);
        auto build = [&](Tape& t) { return scalarize(t, t.mul(t.parameter(a), t.parameter(b)), w); };
        return finite_diff_check(build, {&a, &b});
    }});

    cases.push_back({"softmax", 1e-6, [&scalarize](std::mt19937_64& rng) {
        const std::size_t B = 3, K = 5;
        Parameter logits("logits", random_tensor({B, K}, rng, -2.0, 2.0));
        Tensor w = random_tensor({B, K}, rng);
        auto build = [&](Tape& t) { return scalarize(t, t.softmax(t.parameter(logits)), w); };
        return finite_diff_check(build, {&logits});
    }});

    cases.push_back({"cross_entropy", 1e-6, [](std::mt19937_64& rng) {
        const std::size_t B = 4, K = 3;
        Parameter logits("logits", random_tensor({B, K}, rng, -2.0, 2.0));
        auto targets = random_targets(B, K, rng);
        Reduction red = util::bounded(rng, 2) == 0 ? Reduction::Mean : Reduction::Sum;
        auto build = [&](Tape& t) { return t.cross_entropy(t.parameter(logits), targets, red); };
        return finite_diff_check(build, {&logits});
    }});

    cases.push_back({"network3", 1e-5, [](std::mt19937_64& rng) {
        const std::size_t B = 3, I = 4, H1 = 5, H2 = 4, K = 3;
        Parameter input("input", random_tensor_off_zero({B, I}, rng));
        Parameter w1("w1", random_tensor({I, H1}, rng));
        Parameter b1("b1", random_tensor({H1}, rng, -0.2, 0.2));
        Parameter w2("w2", random_tensor({H1, H2}, rng));
        Parameter b2("b2", random_tensor({H2}, rng, -0.2, 0.2));
        Parameter w3("w3", random_tensor({H2, K}, rng));
        Parameter b3("b3", random_tensor({K}, rng, -0.2, 0.2));
        auto targets = random_targets(B, K, rng);
        auto build = [&](Tape& t) {
            auto h1 = t.relu(t.linear(t.parameter(input), t.parameter(w1), t.parameter(b1)));
            auto h2 = t.relu(t.linear(h1, t.parameter(w2), t.parameter(b2)));
            auto logits = t.linear(h2, t.parameter(w3), t.parameter(b3));
            return t.cross_entropy(logits, targets, Reduction::Mean);
        };
        return finite_diff_check(build, {&input, &w1, &b1, &w2, &b2, &w3, &b3});
    }});

    std::vector<GradCheckCase> results;
    for (const Case& c : cases) {
        GradCheckCase r{c.name, trials, 0.0, c.tolerance, false};
        for (std::size_t trial = 0; trial < trials; ++trial) {
            auto rng = util::make_rng(util::subseed(seed, "gradcheck", c.name, trial));
            r.max_rel_err = std::max(r.max_rel_err, c.run(rng));
        }
        r.pass = r.max_rel_err <= r.tolerance;
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace kwcl::nn
