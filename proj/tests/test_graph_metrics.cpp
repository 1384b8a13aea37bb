#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "churn/graph.hpp"
#include "churn/metrics.hpp"
#include "churn/metrics_io.hpp"
#include "oracles.hpp"

using churn::Graph;

namespace {

Graph triangle() {
    Graph g;
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    g.add_edge("a", "c");
    return g;
}

Graph path3() {
    Graph g;
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    return g;
}

Graph star4() {  // K1,3 with center c
    Graph g;
    g.add_edge("c", "l1");
    g.add_edge("c", "l2");
    g.add_edge("c", "l3");
    return g;
}

Graph complete(std::size_t n) {
    Graph g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            g.add_edge("k" + std::to_string(i), "k" + std::to_string(j));
    return g;
}

Graph cycle4() {
    Graph g;
    g.add_edge("a", "b");
    g.add_edge("b", "c");
    g.add_edge("c", "d");
    g.add_edge("d", "a");
    return g;
}

}  // namespace

TEST_CASE("graph rejects self-loops and collapses parallel edges") {
    Graph g;
    CHECK_THROWS_AS(g.add_edge("x", "x"), churn::GraphError);
    CHECK(g.add_edge("a", "b"));
    CHECK_FALSE(g.add_edge("b", "a"));
    CHECK(g.edge_count() == 1);
    CHECK(g.degree(g.index_of("a")) == 1);
}

TEST_CASE("graph rejects unknown node lookups") {
    Graph g = path3();
    CHECK_THROWS_AS(g.index_of("zzz"), churn::GraphError);
    CHECK_THROWS_AS(churn::degree(g, "zzz"), churn::GraphError);
}

TEST_CASE("degree examples") {
    Graph t = triangle();
    for (const auto& id : t.node_ids()) CHECK(churn::degree(t, id) == 2);
    CHECK(churn::degree(star4(), "c") == 3);
    Graph g = path3();
    g.add_node("iso");
    CHECK(churn::degree(g, "iso") == 0);
}

TEST_CASE("betweenness examples") {
    Graph p = path3();
    auto bc = churn::betweenness_all(p);
    CHECK(bc[p.index_of("b")] == Catch::Approx(1.0));
    CHECK(bc[p.index_of("a")] == Catch::Approx(0.0));

    Graph s = star4();
    CHECK(churn::betweenness_all(s)[s.index_of("c")] == Catch::Approx(3.0));

    Graph c = cycle4();
    for (auto b : churn::betweenness_all(c)) CHECK(b == Catch::Approx(0.5));
}

TEST_CASE("closeness examples") {
    Graph s = star4();
    CHECK(churn::closeness(s, "c") == Catch::Approx(1.0 / 3.0));
    Graph p = path3();
    CHECK(churn::closeness(p, "a") == Catch::Approx(1.0 / 3.0));
    p.add_node("iso");
    CHECK(churn::closeness(p, "iso") == 0.0);
}

TEST_CASE("coreness examples") {
    Graph k4 = complete(4);
    for (auto c : churn::coreness_all(k4)) CHECK(c == 3);

    Graph g = triangle();
    g.add_edge("c", "pendant");
    auto core = churn::coreness_all(g);
    CHECK(core[g.index_of("a")] == 2);
    CHECK(core[g.index_of("b")] == 2);
    CHECK(core[g.index_of("c")] == 2);
    CHECK(core[g.index_of("pendant")] == 1);

    Graph p = path3();
    for (auto c : churn::coreness_all(p)) CHECK(c == 1);
}

TEST_CASE("eccentricity examples") {
    Graph p = path3();
    CHECK(churn::eccentricity(p, "a") == 2);
    CHECK(churn::eccentricity(p, "b") == 1);
    Graph k4 = complete(4);
    CHECK(churn::eccentricity(k4, "k0") == 1);
    p.add_node("iso");
    CHECK(churn::eccentricity(p, "iso") == 0);
}

TEST_CASE("articulation point examples") {
    Graph p = path3();
    auto art = churn::articulation_points(p);
    CHECK(art[p.index_of("b")]);
    CHECK_FALSE(art[p.index_of("a")]);

    Graph c = cycle4();
    for (auto a : churn::articulation_points(c)) CHECK_FALSE(a);

    Graph bowtie;  // two triangles sharing node w
    bowtie.add_edge("a", "b");
    bowtie.add_edge("a", "w");
    bowtie.add_edge("b", "w");
    bowtie.add_edge("c", "d");
    bowtie.add_edge("c", "w");
    bowtie.add_edge("d", "w");
    auto ba = churn::articulation_points(bowtie);
    for (const auto& id : bowtie.node_ids())
        CHECK(ba[bowtie.index_of(id)] == (id == "w"));
}

TEST_CASE("avg_min_cut examples") {
    Graph t = triangle();
    CHECK(churn::avg_min_cut(t, "a") == Catch::Approx(4.0 / 3.0));

    Graph p = path3();
    CHECK(churn::avg_min_cut(p, "a") == Catch::Approx(2.0 / 3.0));

    p.add_node("iso");
    CHECK(churn::avg_min_cut(p, "iso") == 0.0);
    // the isolated node also lowers nothing else's numerator but grows n
    CHECK(churn::avg_min_cut(p, "a") == Catch::Approx(2.0 / 4.0));
}

TEST_CASE("all_metrics bundles the individual measures") {
    CHECK(churn::all_metrics(Graph{}).empty());

    Graph t = triangle();
    for (const auto& m : churn::all_metrics(t)) {
        CHECK(m.degree == 2);
        CHECK(m.coreness == 2);
        CHECK(m.eccentricity == 1);
        CHECK(m.betweenness == Catch::Approx(0.0));
        CHECK(m.closeness == Catch::Approx(0.5));
        CHECK_FALSE(m.is_articulation);
        CHECK(m.avg_min_cut == Catch::Approx(4.0 / 3.0));
    }

    Graph p = path3();
    auto pm = churn::all_metrics(p)[p.index_of("b")];
    CHECK(pm.degree == 2);
    CHECK(pm.betweenness == Catch::Approx(1.0));
    CHECK(pm.is_articulation);
}

TEST_CASE("metrics match brute-force oracles on random small graphs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = oracle::random_graph(rng, 8);
        INFO("trial " << trial << " n=" << g.node_count() << " m=" << g.edge_count());

        auto bc = churn::betweenness_all(g);
        auto bc_oracle = oracle::betweenness(g);
        auto core = churn::coreness_all(g);
        auto core_oracle = oracle::coreness(g);
        auto art = churn::articulation_points(g);
        auto art_oracle = oracle::articulation_points(g);
        auto ecc_oracle = oracle::eccentricity(g);
        auto clo_oracle = oracle::closeness(g);
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            CHECK(bc[v] == Catch::Approx(bc_oracle[v]).margin(1e-9));
            CHECK(core[v] == core_oracle[v]);
            CHECK(art[v] == art_oracle[v]);
            CHECK(churn::eccentricity(g, v) == ecc_oracle[v]);
            CHECK(churn::closeness(g, v) == Catch::Approx(clo_oracle[v]).margin(1e-12));
        }
    }
}

TEST_CASE("min cut verified by exhaustive edge-subset search") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        Graph g = oracle::random_graph(rng, 7);
        const std::size_t n = g.node_count();
        for (std::size_t v = 0; v < n; ++v) {
            double expected_sum = 0.0;
            for (std::size_t u = 0; u < n; ++u) {
                if (u == v) continue;
                std::size_t cut = churn::detail::min_edge_cut(g, v, u);
                REQUIRE(oracle::verify_min_cut(g, v, u, cut));
                expected_sum += static_cast<double>(cut);
            }
            CHECK(churn::avg_min_cut(g, v) ==
                  Catch::Approx(expected_sum / static_cast<double>(n)).margin(1e-9));
        }
    }
}

TEST_CASE("tree betweenness sums to interior-pair count") {
    // random trees: attach node i to a random earlier node
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 3 + rng() % 8;
        Graph g;
        std::vector<std::string> ids{"t0"};
        g.add_node("t0");
        for (std::size_t i = 1; i < n; ++i) {
            std::string id = "t" + std::to_string(i);
            g.add_edge(id, ids[rng() % ids.size()]);
            ids.push_back(id);
        }
        auto d = oracle::distances(oracle::adjacency(g));
        double interior_pairs = 0;  // pairs whose unique path has >= 1 interior node
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t)
                if (d[s][t] >= 2) ++interior_pairs;
        double total = 0;
        for (double b : churn::betweenness_all(g)) total += b;
        // in a tree, each such pair has exactly one shortest path, and its
        // interior nodes each collect 1/1; summing double-counts by path length
        double expected = 0;
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = s + 1; t < n; ++t)
                if (d[s][t] >= 2) expected += d[s][t] - 1;
        CHECK(total == Catch::Approx(expected));
        CHECK(total >= interior_pairs - 1e-9);
    }
}

TEST_CASE("metric invariants on random graphs") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = oracle::random_graph(rng, 8);
        auto core = churn::coreness_all(g);
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            CHECK(core[v] <= g.degree(v));
            if (g.degree(v) > 0) CHECK(churn::eccentricity(g, v) >= 1);
        }
    }
}

TEST_CASE("metrics are invariant under node relabeling") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = oracle::random_graph(rng, 7);
        // relabel ni -> Rx_i and insert in a shuffled order
        std::vector<std::size_t> perm(g.node_count());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
        Graph h;
        auto relabel = [](std::size_t i) { return "R" + std::to_string(i * 13 + 5); };
        for (auto i : perm) h.add_node(relabel(i));
        for (const auto& [u, v] : g.edges()) h.add_edge(relabel(u), relabel(v));

        auto gm = churn::all_metrics(g);
        auto hm = churn::all_metrics(h);
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            const auto& a = gm[v];
            const auto& b = hm[h.index_of(relabel(v))];
            CHECK(a.degree == b.degree);
            CHECK(a.betweenness == Catch::Approx(b.betweenness).margin(1e-9));
            CHECK(a.closeness == Catch::Approx(b.closeness).margin(1e-12));
            CHECK(a.coreness == b.coreness);
            CHECK(a.eccentricity == b.eccentricity);
            CHECK(a.is_articulation == b.is_articulation);
            CHECK(a.avg_min_cut == Catch::Approx(b.avg_min_cut).margin(1e-9));
        }
    }
}

TEST_CASE("adding an edge never decreases endpoint degree or coreness") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        Graph g = oracle::random_graph(rng, 7);
        // pick a missing pair, if any
        std::size_t n = g.node_count();
        for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t v = u + 1; v < n; ++v) {
                if (g.has_edge(u, v)) continue;
                Graph h;
                for (const auto& id : g.node_ids()) h.add_node(id);
                for (const auto& [a, b] : g.edges()) h.add_edge(g.id_of(a), g.id_of(b));
                h.add_edge(g.id_of(u), g.id_of(v));
                auto core_g = churn::coreness_all(g);
                auto core_h = churn::coreness_all(h);
                CHECK(h.degree(u) == g.degree(u) + 1);
                CHECK(core_h[u] >= core_g[u]);
                CHECK(core_h[v] >= core_g[v]);
                u = v = n;  // one pair per trial
            }
        }
    }
}

TEST_CASE("avg_min_cut sampling mode reports its sample size") {
    std::mt19937 rng(71);
    Graph g = oracle::random_graph(rng, 8);
    churn::MinCutOptions opt;
    opt.sample_threshold = 2;  // force sampling
    opt.sample_size = 3;
    auto res = churn::avg_min_cut_detailed(g, 0, opt);
    CHECK(res.sampled);
    CHECK(res.pairs_evaluated == std::min<std::size_t>(3, g.node_count() - 1));
    auto exact = churn::avg_min_cut_detailed(g, 0);
    CHECK_FALSE(exact.sampled);
}

TEST_CASE("edge list round-trips") {
    Graph g = triangle();
    g.add_edge("c", "d");
    std::stringstream ss;
    churn::save_edge_list(g, ss);
    Graph h = churn::load_edge_list(ss);
    CHECK(h.node_count() == g.node_count());
    CHECK(h.edge_count() == g.edge_count());
    std::stringstream ss2;
    churn::save_edge_list(h, ss2);
    std::stringstream ss3;
    churn::save_edge_list(g, ss3);
    CHECK(ss2.str() == ss3.str());
}

TEST_CASE("metrics CSV has the documented header") {
    Graph g = path3();
    std::stringstream ss;
    churn::save_metrics_csv(g, churn::all_metrics(g), ss);
    std::string header;
    std::getline(ss, header);
    CHECK(header ==
          "node_id,degree,betweenness,closeness,coreness,eccentricity,is_articulation,avg_min_cut");
}
