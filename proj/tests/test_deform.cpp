#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "field_oracle.hpp"
#include "mflat/datasets.hpp"
#include "mflat/deform.hpp"
#include "mflat/errors.hpp"
#include "test_helpers.hpp"

using namespace mflat;

namespace {

Eigen::RowVectorXd row2(double x, double y) {
    Eigen::RowVectorXd v(2);
    v << x, y;
    return v;
}

NeighborTable table_for(const PointCloud& cloud, int k) {
    return NeighborTable(build_soft_neighborhoods(pairwise_distances(cloud), k), cloud.count());
}

PointCloud equilibrium_pair() {
    Eigen::MatrixXd coords(2, 2);
    coords << 0.0, 0.0, 1.0, 0.0;
    return PointCloud{coords};
}

}  // namespace

TEST_CASE("repel: non-neighbor contributes a unit vector") {
    const auto v = repel_vector(row2(2.0, 0.0), row2(0.0, 0.0), 2.0);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 0.0);
}

TEST_CASE("repel: the nearest neighbor (degree one) contributes nothing") {
    const auto v = repel_vector(row2(2.0, 0.0), row2(0.0, 0.0), 2.0, 1.0);
    CHECK(v(0) == 0.0);
    CHECK(v(1) == 0.0);
}

TEST_CASE("repel: neighbor with degree 0.5") {
    const auto v = repel_vector(row2(1.0, 0.0), row2(0.0, 0.0), 1.0, 0.5);
    CHECK(v(0) == 0.5);
    CHECK(v(1) == 0.0);
}

TEST_CASE("elastic: zero at rest length") {
    const auto v = elastic_vector(row2(3.0, 4.0), row2(0.0, 0.0), 5.0, 5.0, 0.7);
    CHECK(v(0) == 0.0);
    CHECK(v(1) == 0.0);
}

TEST_CASE("elastic: compressed neighbor pushes away") {
    const auto v = elastic_vector(row2(1.0, 0.0), row2(0.0, 0.0), 1.0, 2.0, 1.0);
    CHECK(v(0) == 1.0);
    CHECK(v(1) == 0.0);
}

TEST_CASE("elastic: non-neighbors contribute nothing") {
    const auto v = elastic_vector(row2(1.0, 0.0), row2(0.0, 0.0), 1.0, 17.0);
    CHECK(v(0) == 0.0);
    CHECK(v(1) == 0.0);
}

TEST_CASE("coincident pairs contribute zero vectors") {
    const auto p = row2(1.0, 1.0);
    CHECK(repel_vector(p, p, 0.0).isZero(0.0));
    CHECK(repel_vector(p, p, 0.0, 0.5).isZero(0.0));
    CHECK(elastic_vector(p, p, 0.0, 1.0, 0.5).isZero(0.0));
}

TEST_CASE("alpha schedule") {
    DeformConfig config;

    SUBCASE("step zero is the full amplitude") {
        const auto [a1, a2] = schedule_alphas(0, config);
        CHECK(a1 == 1e-4);
        CHECK(a2 == 0.1);
    }
    SUBCASE("quarter period is (numerically) zero") {
        const auto [a1, a2] = schedule_alphas(15, config);
        CHECK(std::abs(a1) < 1e-19);
        CHECK(a2 == 0.1);
    }
    SUBCASE("half period without clamp is the negative amplitude") {
        config.clamp_alpha1 = false;
        const auto [a1, a2] = schedule_alphas(30, config);
        CHECK(a1 == -1e-4);
        CHECK(a2 == 0.1);
    }
    SUBCASE("half period with clamp sticks at zero") {
        config.clamp_alpha1 = true;
        CHECK(schedule_alphas(30, config).first == 0.0);
        CHECK(schedule_alphas(29, config).first == 0.0);
    }
    SUBCASE("the schedule is periodic") {
        config.clamp_alpha1 = false;
        for (int c : {0, 7, 31, 59}) {
            CHECK(schedule_alphas(c, config) == schedule_alphas(c + 60, config));
        }
    }
}

TEST_CASE("total field of a single point is zero") {
    PointCloud single{Eigen::MatrixXd::Zero(1, 3)};
    NeighborTable table(build_soft_neighborhoods(pairwise_distances(single), 1), 1);
    const auto field = total_field(single, table, 1e-4, 0.1);
    CHECK(field.rows() == 1);
    CHECK(field.isZero(0.0));
}

TEST_CASE("two points at rest are in equilibrium") {
    const auto cloud = equilibrium_pair();
    const auto field = total_field(cloud, table_for(cloud, 1), 1e-4, 0.1);
    CHECK(field.isZero(0.0));
}

TEST_CASE("field matches the brute-force oracle") {
    std::mt19937 rng(921);
    const auto cloud = testutil::random_cloud(rng, 5, 3);
    const int k = 2;
    const auto nbhds = build_soft_neighborhoods(pairwise_distances(cloud), k);
    const NeighborTable table(nbhds, cloud.count());

    const auto expected =
        oracle::total_field(testutil::to_rows(cloud),
                            oracle::soft_neighborhoods(testutil::to_rows(cloud), k), 1e-4, 0.1);
    const auto field = total_field(cloud, table, 1e-4, 0.1);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index c = 0; c < 3; ++c) {
            const double a = field(i, c);
            const double b = expected[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            CHECK(std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}));
        }
    }
}

TEST_CASE("threaded field evaluation is bitwise identical") {
    std::mt19937 rng(922);
    const auto cloud = testutil::random_cloud(rng, 37, 4);
    const auto nbhds = build_soft_neighborhoods(pairwise_distances(cloud), 5);
    const NeighborTable table(nbhds, cloud.count());

    const auto sequential = detail::total_field_threads(cloud.coords, table, 1e-4, 0.1, 1);
    for (int threads : {2, 3, 8}) {
        const auto parallel = detail::total_field_threads(cloud.coords, table, 1e-4, 0.1, threads);
        REQUIRE(parallel.rows() == sequential.rows());
        CHECK(std::memcmp(sequential.data(), parallel.data(),
                          sizeof(double) * static_cast<std::size_t>(sequential.size())) == 0);
    }
}

TEST_CASE("equilibrium pair does not move in a step") {
    DeformState state{equilibrium_pair(), 0, 0.0};
    const auto record = deform_step(state, table_for(state.cloud, 1), DeformConfig{});
    CHECK(record.step == 1);
    CHECK(record.total_displacement == 0.0);
    CHECK(state.cloud.coords == equilibrium_pair().coords);
}

TEST_CASE("a cloud in the z=0 plane stays there exactly") {
    std::mt19937 rng(923);
    PointCloud cloud{Eigen::MatrixXd::Zero(20, 3)};
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (Eigen::Index i = 0; i < 20; ++i) {
        cloud.coords(i, 0) = coord(rng);
        cloud.coords(i, 1) = coord(rng);
    }
    DeformConfig config;
    DeformState state{cloud, 0, 0.0};
    const auto table = table_for(cloud, 5);
    for (int step = 0; step < 10; ++step) {
        deform_step(state, table, config);
        for (Eigen::Index i = 0; i < 20; ++i) {
            CHECK(state.cloud.coords(i, 2) == 0.0);
        }
    }
}

TEST_CASE("cylinder step-0 displacement matches the oracle") {
    const auto cloud = generate_half_cylinder(SurfaceSpec{});
    DeformConfig config;  // k resolves to 10
    DeformState state{cloud, 0, 0.0};
    const auto record = deform_step(state, table_for(cloud, 10), config);

    const auto rows = testutil::to_rows(cloud);
    const auto field = oracle::total_field(rows, oracle::soft_neighborhoods(rows, 10), 1e-4, 0.1);
    double expected = 0.0;
    for (const auto& v : field) {
        double sq = 0.0;
        for (double c : v) sq += c * c;
        expected += std::sqrt(sq);
    }
    CHECK(record.total_displacement == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("equilibrium run stops on epsilon after one step") {
    const auto outcome = run_deformation(equilibrium_pair(), DeformConfig{});
    CHECK(outcome.stop_reason == StopReason::epsilon);
    CHECK(outcome.steps == 1);
    REQUIRE(outcome.trace.records.size() == 1);
    CHECK(outcome.trace.records[0].total_displacement == 0.0);
}

TEST_CASE("single-point run terminates immediately") {
    PointCloud single{Eigen::MatrixXd::Zero(1, 4)};
    const auto outcome = run_deformation(single, DeformConfig{});
    CHECK(outcome.stop_reason == StopReason::epsilon);
    CHECK(outcome.steps == 1);
    CHECK(outcome.cloud.coords == single.coords);
}

TEST_CASE("invalid configs are rejected before stepping") {
    DeformConfig config;
    config.max_steps = 0;
    CHECK_THROWS_AS(run_deformation(equilibrium_pair(), config), config_error);

    config = DeformConfig{};
    config.period = 0;
    CHECK_THROWS_AS(run_deformation(equilibrium_pair(), config), config_error);

    config = DeformConfig{};
    config.epsilon = -1.0;
    CHECK_THROWS_AS(run_deformation(equilibrium_pair(), config), config_error);

    config = DeformConfig{};
    config.alpha2 = -0.5;
    CHECK_THROWS_AS(run_deformation(equilibrium_pair(), config), config_error);
}

TEST_CASE("divergence is reported with the failing step") {
    Eigen::MatrixXd coords(4, 1);
    coords << 0.0, 0.1, 5.0, 6.0;
    DeformConfig config;
    config.k = 1;
    config.alpha1_amplitude = 1e308;
    try {
        run_deformation(PointCloud{coords}, config);
        FAIL("expected divergence");
    } catch (const divergence_error& e) {
        CHECK(e.step() >= 1);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("trace steps increase strictly and record the alpha used") {
    const auto cloud = generate_half_cylinder(SurfaceSpec{.grid_u = 4, .grid_v = 3});
    DeformConfig config;
    config.max_steps = 7;
    config.epsilon = 0.0;
    const auto outcome = run_deformation(cloud, config);
    REQUIRE(outcome.trace.records.size() == 7);
    for (std::size_t r = 0; r < 7; ++r) {
        CHECK(outcome.trace.records[r].step == static_cast<int>(r) + 1);
        CHECK(outcome.trace.records[r].alpha1 ==
              schedule_alphas(static_cast<int>(r), config).first);
    }
}

TEST_CASE("pca ratios are recorded on the requested cadence") {
    const auto cloud = generate_half_cylinder(SurfaceSpec{.grid_u = 4, .grid_v = 3});
    DeformConfig config;
    config.max_steps = 9;
    config.epsilon = 0.0;
    config.trace_pca_every = 3;
    const auto outcome = run_deformation(cloud, config);
    for (const auto& record : outcome.trace.records) {
        if (record.step % 3 == 0) {
            CHECK(record.pca_ratios.size() == 3);
        } else {
            CHECK(record.pca_ratios.empty());
        }
    }
}

TEST_CASE("hyperplane invariance holds for tilted planes") {
    std::mt19937 rng(924);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);

    // a plane through t spanned by two orthonormal vectors
    Eigen::Matrix3d rotation =
        (Eigen::AngleAxisd(0.83, Eigen::Vector3d::UnitX()) *
         Eigen::AngleAxisd(-0.41, Eigen::Vector3d::UnitY()) *
         Eigen::AngleAxisd(0.29, Eigen::Vector3d::UnitZ()))
            .toRotationMatrix();
    const Eigen::Vector3d normal = rotation.col(2);
    const Eigen::Vector3d offset(0.7, -1.3, 2.1);

    PointCloud cloud{Eigen::MatrixXd(25, 3)};
    for (Eigen::Index i = 0; i < 25; ++i) {
        const Eigen::Vector3d in_plane =
            coord(rng) * rotation.col(0) + coord(rng) * rotation.col(1) + offset;
        cloud.coords.row(i) = in_plane.transpose();
    }

    const double level = normal.dot(offset);
    DeformConfig config;
    config.k = 6;
    DeformState state{cloud, 0, 0.0};
    const auto table = table_for(cloud, 6);
    for (int step = 0; step < 50; ++step) {
        deform_step(state, table, config);
        for (Eigen::Index i = 0; i < 25; ++i) {
            const double residual = normal.dot(state.cloud.coords.row(i).transpose()) - level;
            CHECK(std::abs(residual) <= 1e-12);
        }
    }
}

TEST_CASE("trajectories are equivariant under rigid motion") {
    std::mt19937 rng(925);
    const auto cloud = testutil::random_cloud(rng, 15, 3);

    Eigen::Matrix3d rotation =
        (Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 2).normalized())).toRotationMatrix();
    Eigen::RowVector3d translation(4.0, -2.5, 0.75);

    PointCloud moved{(cloud.coords * rotation.transpose()).rowwise() + translation};

    DeformConfig config;
    config.k = 4;
    DeformState state_a{cloud, 0, 0.0};
    DeformState state_b{moved, 0, 0.0};
    const auto table_a = table_for(cloud, 4);
    const auto table_b = table_for(moved, 4);

    for (int step = 0; step < 40; ++step) {
        deform_step(state_a, table_a, config);
        deform_step(state_b, table_b, config);
        const Eigen::MatrixXd mapped =
            (state_a.cloud.coords * rotation.transpose()).rowwise() + translation;
        CHECK((mapped - state_b.cloud.coords).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("identical runs are bitwise identical") {
    const auto cloud = generate_gaussian_surface(SurfaceSpec{
        .kind = SurfaceKind::gaussian_surface, .grid_u = 6, .grid_v = 5});
    DeformConfig config;
    config.max_steps = 50;
    config.trace_pca_every = 10;

    const auto first = run_deformation(cloud, config);
    const auto second = run_deformation(cloud, config);
    REQUIRE(first.steps == second.steps);
    CHECK(std::memcmp(first.cloud.coords.data(), second.cloud.coords.data(),
                      sizeof(double) * static_cast<std::size_t>(first.cloud.coords.size())) == 0);
    REQUIRE(first.trace.records.size() == second.trace.records.size());
    for (std::size_t r = 0; r < first.trace.records.size(); ++r) {
        CHECK(first.trace.records[r].total_displacement ==
              second.trace.records[r].total_displacement);
        CHECK(first.trace.records[r].pca_ratios == second.trace.records[r].pca_ratios);
    }
}

TEST_CASE("trace files round-trip") {
    DeformTrace trace;
    trace.records.push_back(StepRecord{1, 1e-4, 0.25, {}});
    trace.records.push_back(StepRecord{2, 9.5e-5, 0.5, {0.5, 0.3, 0.2}});

    std::stringstream buffer;
    write_trace(buffer, trace);
    const auto parsed = read_trace(buffer);

    REQUIRE(parsed.records.size() == 2);
    CHECK(parsed.records[0].step == 1);
    CHECK(parsed.records[0].alpha1 == 1e-4);
    CHECK(parsed.records[0].total_displacement == 0.25);
    CHECK(parsed.records[0].pca_ratios.empty());
    CHECK(parsed.records[1].pca_ratios ==
          std::vector<double>{0.5, 0.3, 0.2, 0.0, 0.0, 0.0});
}

TEST_CASE("malformed trace lines name the line number") {
    std::stringstream buffer("1,0.0001,0.25\nnot,a,number\n");
    try {
        read_trace(buffer);
        FAIL("expected ingestion error");
    } catch (const ingestion_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    std::stringstream wrong_arity("1,2\n");
    CHECK_THROWS_AS(read_trace(wrong_arity), ingestion_error);

    std::stringstream fractional_step("2.7,0.0001,0.25\n");
    CHECK_THROWS_AS(read_trace(fractional_step), ingestion_error);
}
