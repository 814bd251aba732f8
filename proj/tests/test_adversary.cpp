#include <doctest.h>

#include <cmath>

#include "secmeans/adversary.hpp"
#include "secmeans/experiment.hpp"
#include "secmeans/rng.hpp"
#include "secmeans/secret_sharing.hpp"

using namespace secmeans;

namespace {

Dataset make_1d(const std::vector<double>& values, double x_max) {
    Dataset d;
    for (double v : values) d.x.push_back({v});
    d.x_max = x_max;
    return d;
}

// Ground-truth recomputation the coalition must match exactly.
void check_knowledge_sound(const CoalitionKnowledge& kn, const Dataset& data,
                           const std::vector<Labels>& label_history) {
    for (const auto& comp : kn.components) {
        REQUIRE(static_cast<int>(comp.per_iter.size()) == kn.iterations);
        for (int t = 0; t < kn.iterations; ++t) {
            const auto& view = comp.per_iter[t];
            for (int j = 0; j < kn.k; ++j) {
                std::vector<double> sum(kn.dim, 0.0);
                long long count = 0;
                for (int i : comp.members) {
                    if (label_history[t][i] != j) continue;
                    ++count;
                    for (int c = 0; c < kn.dim; ++c) sum[c] += data.x[i][c];
                }
                CHECK(view.counts[j] == count);
                for (int c = 0; c < kn.dim; ++c) CHECK(view.sums[j][c] == sum[c]);
            }
        }
    }
}

KmeansConfig protocol_cfg(ProtocolKind kind, std::uint64_t seed) {
    KmeansConfig cfg;
    cfg.k = 2;
    cfg.max_iters = 12;
    cfg.scale = 1;
    cfg.protocol = {kind, kind == ProtocolKind::RandomGossip ? 40000L : 2000L, 17};
    cfg.master_seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("empty coalition yields empty knowledge") {
    TranscriptStore store(4);
    store.k = 2;
    store.dim = 1;
    auto kn = coalition_knowledge(store, HonestPartition::from_corrupted(4, {}),
                                  Topology::ring(4));
    CHECK(kn.components.empty());
}

TEST_CASE("coalition knowledge is sound on ring(6) with corrupted {2,5}") {
    Dataset data = make_1d({1, 2, 3, 10, 11, 12}, 20.0);
    Topology g = Topology::ring(6);
    Centers init{{0.0}, {9.0}};
    HonestPartition part = HonestPartition::from_corrupted(6, {2, 5});

    for (auto kind : {ProtocolKind::ExactTreeSum, ProtocolKind::SyncConsensus,
                      ProtocolKind::RandomGossip}) {
        TranscriptStore store(6);
        auto result = run_kmeans(g, data, init, protocol_cfg(kind, 42), &store);
        REQUIRE(result.converged);

        auto kn = coalition_knowledge(store, part, g);
        REQUIRE(kn.components.size() == 2);
        CHECK(kn.components[0].members == std::vector<int>{0, 1});
        CHECK(kn.components[1].members == std::vector<int>{3, 4});
        check_knowledge_sound(kn, data, result.label_history);
    }
}

TEST_CASE("coalition knowledge follows label movement") {
    // Node 4 starts nearer the low center, then migrates to the high
    // cluster once the centers settle.
    Dataset data = make_1d({0, 1, 2, 14, 8, 15}, 20.0);
    Topology g = Topology::erdos_renyi(6, 0.8, 9);
    REQUIRE(g.is_connected());
    Centers init{{2.0}, {16.0}};
    TranscriptStore store(6);
    auto result = run_kmeans(g, data, init, protocol_cfg(ProtocolKind::ExactTreeSum, 7), &store);
    REQUIRE(result.converged);
    HonestPartition part = HonestPartition::from_corrupted(6, {0});
    check_knowledge_sound(coalition_knowledge(store, part, g), data, result.label_history);
}

TEST_CASE("coalition knowledge rejects a mismatched graph") {
    TranscriptStore store(4);
    store.k = 1;
    store.dim = 1;
    CHECK_THROWS_AS(coalition_knowledge(store, HonestPartition::from_corrupted(5, {0}),
                                        Topology::ring(5)),
                    std::invalid_argument);
}

namespace {

// Hand-built knowledge: one honest component {1..5}, 1-D values
// (2,3,5,8,9), two iterations.
CoalitionKnowledge hand_knowledge(const std::vector<ClusterView>& views) {
    CoalitionKnowledge kn;
    kn.part = HonestPartition::from_corrupted(6, {0});
    kn.k = 2;
    kn.dim = 1;
    kn.iterations = static_cast<int>(views.size());
    ComponentKnowledge ck;
    ck.members = {1, 2, 3, 4, 5};
    ck.per_iter = views;
    kn.components.push_back(ck);
    return kn;
}

}  // namespace

TEST_CASE("differencing exposes a single mover") {
    // iter 0: nodes 1,2,3 in cluster 0 and 4,5 in cluster 1;
    // iter 1: node 3 (value 5) moves to cluster 1.
    ClusterView v0{{{10.0}, {17.0}}, {3, 2}};
    ClusterView v1{{{5.0}, {22.0}}, {2, 3}};
    auto kn = hand_knowledge({v0, v1});
    std::vector<Labels> history{{0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 1, 1}};

    auto full = singleton_attack(kn, history);
    REQUIRE(full.size() == 1);
    CHECK(full[0].node == 3);
    CHECK(full[0].iter_m == 0);
    CHECK(full[0].iter_k == 1);
    CHECK(full[0].cluster_from == 0);
    CHECK(full[0].cluster_to == 1);
    CHECK(full[0].value == std::vector<double>{5.0});

    auto report = leakage_report(kn, history);
    REQUIRE(report.entries.size() == 5);
    for (const auto& e : report.entries) {
        CHECK(e.component_size == 5);
        CHECK_FALSE(e.final_label_exposed);
        if (e.node == 3) {
            CHECK(e.cls == LeakClass::Full);
            REQUIRE(e.evidence.has_value());
            CHECK(e.evidence->value == std::vector<double>{5.0});
        } else {
            CHECK(e.cls == LeakClass::Perfect);
        }
    }
}

TEST_CASE("a simultaneous two-node swap exposes nobody") {
    // iter 1: node 3 (value 5) and node 4 (value 8) swap clusters, so
    // counts are unchanged and only their sum difference is visible.
    ClusterView v0{{{10.0}, {17.0}}, {3, 2}};
    ClusterView v1{{{13.0}, {14.0}}, {3, 2}};
    auto kn = hand_knowledge({v0, v1});
    std::vector<Labels> history{{0, 0, 0, 0, 1, 1}, {0, 0, 0, 1, 0, 1}};
    CHECK(singleton_attack(kn, history).empty());
    for (const auto& e : leakage_report(kn, history).entries) {
        CHECK(e.cls == LeakClass::Perfect);
    }
}

TEST_CASE("no label changes yields no differencing entries") {
    ClusterView v{{{10.0}, {17.0}}, {3, 2}};
    auto kn = hand_knowledge({v, v, v});
    std::vector<Labels> history(3, Labels{0, 0, 0, 0, 1, 1});
    CHECK(singleton_attack(kn, history).empty());
}

TEST_CASE("singleton occupancy and final-label exposure") {
    // Component {1,2,3}: cluster 1 holds only node 3 (value 7) at iter 0,
    // then everyone collapses into cluster 0.
    CoalitionKnowledge kn;
    kn.part = HonestPartition::from_corrupted(4, {0});
    kn.k = 2;
    kn.dim = 1;
    kn.iterations = 2;
    ComponentKnowledge ck;
    ck.members = {1, 2, 3};
    ck.per_iter = {ClusterView{{{5.0}, {7.0}}, {2, 1}}, ClusterView{{{12.0}, {0.0}}, {3, 0}}};
    kn.components.push_back(ck);
    std::vector<Labels> history{{0, 0, 0, 1}, {0, 0, 0, 0}};

    auto full = singleton_attack(kn, history);
    REQUIRE(full.size() >= 1);
    CHECK(full[0].node == 3);
    CHECK(full[0].iter_m == full[0].iter_k);
    CHECK(full[0].value == std::vector<double>{7.0});

    auto report = leakage_report(kn, history);
    for (const auto& e : report.entries) {
        CHECK(e.final_label_exposed);  // all of the component ends in cluster 0
        if (e.node == 3) {
            CHECK(e.cls == LeakClass::Full);
        } else {
            CHECK(e.cls == LeakClass::Bounded);
        }
    }
}

TEST_CASE("a singleton component is fully exposed") {
    CoalitionKnowledge kn;
    kn.part = HonestPartition::from_corrupted(3, {0, 2});
    kn.k = 2;
    kn.dim = 1;
    kn.iterations = 1;
    ComponentKnowledge ck;
    ck.members = {1};
    ck.per_iter = {ClusterView{{{4.0}, {0.0}}, {1, 0}}};
    kn.components.push_back(ck);
    std::vector<Labels> history{{0, 0, 1}};
    auto report = leakage_report(kn, history);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].cls == LeakClass::Full);
    CHECK(report.entries[0].final_label_exposed);
    REQUIRE(report.entries[0].evidence.has_value());
    CHECK(report.entries[0].evidence->value == std::vector<double>{4.0});
}

TEST_CASE("report text lists one line per honest node") {
    ClusterView v{{{10.0}, {17.0}}, {3, 2}};
    auto kn = hand_knowledge({v});
    std::vector<Labels> history{{0, 0, 0, 0, 1, 1}};
    std::string text = leakage_report(kn, history).to_text();
    CHECK(text.find("node 1 class perfect component_size 5") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("same_cluster_probability") {
    CHECK(same_cluster_probability(1, 4) == 0.25);
    CHECK(same_cluster_probability(5, 1) == 1.0);
    CHECK(same_cluster_probability(3, 2) == 0.125);
    for (int m = 1; m < 8; ++m) {
        CHECK(same_cluster_probability(m + 1, 3) < same_cluster_probability(m, 3));
    }
    CHECK(same_cluster_probability(1, 7) == doctest::Approx(1.0 / 7.0));
    CHECK_THROWS_AS(same_cluster_probability(0, 2), std::invalid_argument);
}

TEST_CASE("share_uniformity_test accepts uniform and rejects constant samples") {
    FieldModulus p(BigInt(11));
    DetRng rng(314);
    std::vector<FieldElement> uniform;
    for (int i = 0; i < 2000; ++i) uniform.push_back(rng.uniform_field(p));
    auto ok = share_uniformity_test(uniform, p);
    CHECK_FALSE(ok.reject);
    CHECK(ok.threshold == doctest::Approx(23.209).epsilon(0.001));

    std::vector<FieldElement> constant(1500, FieldElement(4, p));
    CHECK(share_uniformity_test(constant, p).reject);

    std::vector<FieldElement> few(100, FieldElement(4, p));
    CHECK_THROWS_AS(share_uniformity_test(few, p), std::invalid_argument);
}

TEST_CASE("own shares from repeated seeded runs look uniform") {
    FieldModulus p(BigInt(11));
    Topology g = Topology::ring(2);
    std::vector<std::vector<FieldElement>> inputs{{FieldElement(3, p)}, {FieldElement(7, p)}};
    std::vector<FieldElement> samples;
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        auto randoms = exchange_randoms(g, 1, p, seed, 0);
        auto shares = make_shares(inputs, randoms, g);
        samples.push_back(shares.own[0][0]);
        samples.push_back(shares.own[1][0]);
    }
    CHECK_FALSE(share_uniformity_test(samples, p).reject);
}
