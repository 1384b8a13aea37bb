#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <sstream>

#include "churn/features.hpp"

using namespace churn;

namespace {

const Timestamp kT0 = parse_timestamp("2020-01-01");

Snapshot path_snapshot() {
    std::vector<InteractionEvent> evs{{kT0, "a", "b", EventKind::comment},
                                      {kT0 + 1, "b", "c", EventKind::comment}};
    return build_snapshot(evs, kT0, 30, "t");
}

FeatureMatrix tiny_matrix(std::vector<std::vector<double>> cols, std::vector<bool> labels,
                          std::vector<std::string> names) {
    FeatureMatrix m;
    for (const auto& n : names)
        (is_exogenous_feature(n) ? m.exogenous_columns : m.network_columns).push_back(n);
    for (std::size_t r = 0; r < labels.size(); ++r) {
        FeatureMatrix::Row row;
        row.node_id = "n" + std::to_string(r);
        for (const auto& c : cols) row.values.push_back(c[r]);
        row.leave_label = labels[r];
        m.rows.push_back(row);
    }
    return m;
}

}  // namespace

TEST_CASE("assemble produces one row per initial node in column order") {
    Snapshot snap = path_snapshot();
    LeaveLabeling lab;
    lab.initial_nodes = {"a", "b", "c"};
    lab.departed = {"c"};
    std::map<std::string, MemberAttributes> attrs;
    attrs["a"] = {"a", kT0, kT0 + kSecondsPerDay, 10, 1, 100, 500};
    attrs["b"] = {"b", kT0, kT0 + kSecondsPerDay, 20, 2, 200, 600};
    // "c" is missing on purpose

    auto res = assemble(snap, lab, attrs);
    const auto& m = res.matrix;
    REQUIRE(m.rows.size() == 3);
    CHECK(res.members_missing_attributes == 1);
    CHECK(m.columns() == std::vector<std::string>{"betweenness", "closeness", "coreness", "degree",
                                                  "eccentricity", "is_articulation", "min_cut",
                                                  "downvotes", "reputation", "upvotes", "views"});
    int departed_rows = 0;
    for (const auto& r : m.rows) departed_rows += r.leave_label;
    CHECK(departed_rows == 1);

    // node b is the path center: degree 2, betweenness 1, articulation
    const auto& row_b = m.rows[1];
    REQUIRE(row_b.node_id == "b");
    CHECK(row_b.values[m.column_index("degree")] == 2.0);
    CHECK(row_b.values[m.column_index("betweenness")] == 1.0);
    CHECK(row_b.values[m.column_index("is_articulation")] == 1.0);

    // missing member -> all exogenous zero
    const auto& row_c = m.rows[2];
    REQUIRE(row_c.node_id == "c");
    for (const auto& name : exogenous_feature_names())
        CHECK(row_c.values[m.column_index(name)] == 0.0);

    // labeling must cover exactly the snapshot nodes
    LeaveLabeling bad = lab;
    bad.initial_nodes.insert("ghost");
    CHECK_THROWS_AS(assemble(snap, bad, attrs), DataError);
}

TEST_CASE("assemble with empty departed set labels everything false") {
    Snapshot snap = path_snapshot();
    LeaveLabeling lab;
    lab.initial_nodes = {"a", "b", "c"};
    auto res = assemble(snap, lab, {});
    for (const auto& r : res.matrix.rows) CHECK_FALSE(r.leave_label);
}

TEST_CASE("pearson examples") {
    auto m = tiny_matrix({{1, 2, 3}, {5, 7, 9}}, {false, false, true}, {"degree", "coreness"});
    auto pm = pearson_matrix(m);
    CHECK(pm.rho[0][1] == Catch::Approx(1.0));  // y = 2x + 3

    auto neg = tiny_matrix({{1, 2, 3}, {-1, -2, -3}}, {false, false, true}, {"degree", "coreness"});
    CHECK(pearson_matrix(neg).rho[0][1] == Catch::Approx(-1.0));

    auto half = tiny_matrix({{1, 2, 3}, {1, 3, 2}}, {false, false, true}, {"degree", "coreness"});
    CHECK(pearson_matrix(half).rho[0][1] == Catch::Approx(0.5));
}

TEST_CASE("pearson handles constant features and stays bounded") {
    auto m = tiny_matrix({{1, 2, 3}, {4, 4, 4}}, {false, false, true}, {"degree", "coreness"});
    auto pm = pearson_matrix(m);
    CHECK(pm.constant[1]);
    CHECK(pm.rho[0][1] == 0.0);
    CHECK(pm.rho[1][1] == 0.0);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(10), y(10);
        for (auto& v : x) v = static_cast<double>(rng() % 100);
        for (auto& v : y) v = static_cast<double>(rng() % 100);
        auto r = tiny_matrix({x, y}, std::vector<bool>(10, false), {"degree", "coreness"});
        auto p = pearson_matrix(r);
        CHECK(std::abs(p.rho[0][1]) <= 1.0 + 1e-12);
        CHECK(p.rho[0][1] == Catch::Approx(p.rho[1][0]));

        // invariance under positive affine transform of one feature
        std::vector<double> x2(10);
        for (std::size_t i = 0; i < 10; ++i) x2[i] = 3.5 * x[i] + 11.0;
        auto r2 = tiny_matrix({x2, y}, std::vector<bool>(10, false), {"degree", "coreness"});
        CHECK(pearson_matrix(r2).rho[0][1] == Catch::Approx(p.rho[0][1]).margin(1e-9));
    }
    CHECK_THROWS_AS(pearson_matrix(tiny_matrix({{1.0}}, {false}, {"degree"})), DataError);
}

TEST_CASE("active-weeks CDF") {
    std::map<std::string, MemberAttributes> attrs;
    attrs["a"] = {"a", kT0, kT0 + 70 * kSecondsPerDay, 0, 0, 0, 0};
    auto single = active_weeks_cdf(attrs);
    REQUIRE(single.size() == 1);
    CHECK(single[0].first == 10);
    CHECK(single[0].second == 1.0);

    attrs["b"] = {"b", kT0, kT0, 0, 0, 0, 0};
    attrs["c"] = {"c", kT0, kT0 + 7 * kSecondsPerDay, 0, 0, 0, 0};
    attrs["a"].last_login_date = kT0 + 14 * kSecondsPerDay;
    auto cdf = active_weeks_cdf(attrs);
    REQUIRE(cdf.size() == 3);
    CHECK(cdf[0].first == 0);
    CHECK(cdf[0].second == Catch::Approx(1.0 / 3.0));
    CHECK(cdf[1].first == 1);
    CHECK(cdf[1].second == Catch::Approx(2.0 / 3.0));
    CHECK(cdf[2].first == 2);
    CHECK(cdf[2].second == 1.0);

    // nondecreasing, ends at exactly 1
    for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i].second >= cdf[i - 1].second);
    CHECK(cdf.back().second == 1.0);

    CHECK_THROWS_AS(active_weeks_cdf({}), DataError);
}

TEST_CASE("variant selection honors the network/exogenous split") {
    auto m = tiny_matrix({{1, 2}, {3, 4}, {5, 6}, {7, 8}, {9, 10}, {11, 12}},
                         {false, true},
                         {"coreness", "closeness", "degree", "views", "reputation", "upvotes"});
    VariantSpec spec;
    spec.ranking = {"coreness", "views", "closeness", "reputation", "degree", "upvotes"};

    spec.kind = VariantKind::All;
    auto all = select_variant(m, spec);
    CHECK(all.columns() == m.columns());

    // selected columns keep the source matrix order, not the ranking order
    spec.kind = VariantKind::Best2;
    auto best2 = select_variant(m, spec);
    CHECK(best2.network_columns == std::vector<std::string>{"coreness", "closeness"});
    CHECK(best2.exogenous_columns == std::vector<std::string>{"views", "reputation"});

    spec.kind = VariantKind::Best1;
    auto best1 = select_variant(m, spec);
    CHECK(best1.network_columns == std::vector<std::string>{"coreness"});
    CHECK(best1.exogenous_columns == std::vector<std::string>{"views"});

    spec.kind = VariantKind::Best4;
    auto best4 = select_variant(m, spec);
    CHECK(best4.column_count() == 4);
    auto cols = best4.columns();
    for (const auto& want : {"coreness", "views", "closeness", "reputation"})
        CHECK(std::find(cols.begin(), cols.end(), want) != cols.end());

    // labels unchanged
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        CHECK(best2.rows[i].leave_label == m.rows[i].leave_label);

    spec.ranking = {"coreness"};
    CHECK_THROWS_AS(select_variant(m, spec), DataError);
}

TEST_CASE("feature matrix CSV round-trips bit-exactly") {
    auto m = tiny_matrix({{0.1, 1.0 / 3.0, 2e-17}, {5, 6, 7}}, {false, true, false},
                         {"degree", "views"});
    std::stringstream ss;
    save_feature_matrix(m, ss);
    auto back = load_feature_matrix(ss);
    std::stringstream ss2;
    save_feature_matrix(back, ss2);

    std::stringstream ss3;
    save_feature_matrix(m, ss3);
    CHECK(ss2.str() == ss3.str());
    REQUIRE(back.rows.size() == 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c)
            CHECK(back.rows[r].values[c] == m.rows[r].values[c]);  // exact
}
