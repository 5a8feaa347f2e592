#include "graphprop/errors.hpp"
#include "graphprop/tensor.hpp"
#include "graphprop/tensor_io.hpp"
#include "support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

using namespace graphprop;

namespace {

DenseTensor iota_tensor(Shape shape) {
    std::vector<double> v(static_cast<std::size_t>(shape_product(shape)));
    std::iota(v.begin(), v.end(), 0.0);
    return DenseTensor(std::move(shape), std::move(v));
}

// Increments a multi-index with the first index fastest.
bool next_index(std::vector<Index>& idx, const Shape& shape) {
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (++idx[k] < shape[k]) return true;
        idx[k] = 0;
    }
    return false;
}

} // namespace

TEST(DenseTensor, RejectsInvalidConstruction) {
    EXPECT_THROW(DenseTensor({2, 0}), Error);
    EXPECT_THROW(DenseTensor({2, 2}, std::vector<double>(3)), Error);
    EXPECT_THROW(DenseTensor({1}, std::vector<double>{std::nan("")}), Error);
}

TEST(Matricize, MatrixRowsAreModeTwoFibers) {
    DenseTensor t({2, 2});
    t({0, 0}) = 1;
    t({0, 1}) = 2;
    t({1, 0}) = 3;
    t({1, 1}) = 4;
    const FiberMatrix f = matricize(t, 1);
    EXPECT_EQ(f, (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished());
}

TEST(Matricize, MatchesIndexMapOracle) {
    const DenseTensor t = iota_tensor({2, 3, 2});
    const FiberMatrix f = matricize(t, 2);
    ASSERT_EQ(f.rows(), 6);
    ASSERT_EQ(f.cols(), 2);
    // row p <-> (i1, i2) with p = i1 + 2 i2; value at (i1, i2, c) is i1 + 2 i2 + 6 c
    for (Index i2 = 0; i2 < 3; ++i2) {
        for (Index i1 = 0; i1 < 2; ++i1) {
            for (Index c = 0; c < 2; ++c) EXPECT_EQ(f(i1 + 2 * i2, c), static_cast<double>(i1 + 2 * i2 + 6 * c));
        }
    }
    EXPECT_EQ(refold(f, t.shape(), 2), t);
}

TEST(Matricize, EveryModeEnumeratesFibersFirstIndexFastest) {
    const Shape shape{3, 2, 4, 2};
    const DenseTensor t = iota_tensor(shape);
    for (std::size_t mode = 0; mode < shape.size(); ++mode) {
        const FiberMatrix f = matricize(t, mode);
        std::vector<Index> idx(shape.size(), 0);
        do {
            Index p = 0, stride = 1;
            for (std::size_t k = 0; k < shape.size(); ++k) {
                if (k == mode) continue;
                p += idx[k] * stride;
                stride *= shape[k];
            }
            EXPECT_EQ(f(p, idx[mode]), t(idx));
        } while (next_index(idx, shape));
    }
}

TEST(Matricize, ModeOutOfRangeThrows) {
    const DenseTensor t = iota_tensor({2, 2});
    EXPECT_THROW(matricize(t, 2), Error);
}

TEST(Refold, ScalarAndMismatch) {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 7.0);
    const DenseTensor s = refold(one, {1, 1}, 1);
    EXPECT_EQ(s.values()[0], 7.0);
    EXPECT_THROW(refold(Eigen::MatrixXd::Zero(3, 2), {2, 2}, 1), Error);
}

TEST(Refold, RoundTripPropertyUpToOrderFour) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Index> extent(1, 4), order(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        Shape shape(static_cast<std::size_t>(order(rng)));
        for (auto& e : shape) e = extent(rng);
        const Eigen::MatrixXd v = gp_test::random_matrix(shape_product(shape), 1, rng);
        const DenseTensor t(shape, std::vector<double>(v.data(), v.data() + v.size()));
        for (std::size_t mode = 0; mode < shape.size(); ++mode) {
            const FiberMatrix f = matricize(t, mode);
            EXPECT_EQ(refold(f, shape, mode), t);
            EXPECT_EQ(matricize(refold(f, shape, mode), mode), f);
        }
    }
}

TEST(ModeProduct, MatchesNestedSum) {
    std::mt19937_64 rng(3);
    const Shape shape{3, 4, 2};
    const Eigen::MatrixXd v = gp_test::random_matrix(24, 1, rng);
    const DenseTensor t(shape, std::vector<double>(v.data(), v.data() + 24));
    const Eigen::MatrixXd m = gp_test::random_matrix(5, 4, rng);
    const DenseTensor y = mode_product(t, 1, m);
    ASSERT_EQ(y.shape(), (Shape{3, 5, 2}));
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 5; ++j) {
            for (Index k = 0; k < 2; ++k) {
                double s = 0.0;
                for (Index q = 0; q < 4; ++q) s += m(j, q) * t({i, q, k});
                EXPECT_NEAR(y({i, j, k}), s, 1e-12);
            }
        }
    }
}

TEST(Tucker, IdentityFactorsReturnCore) {
    const DenseTensor core = iota_tensor({2, 3, 2});
    TuckerFactors tf{core, {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(2, 2)}};
    EXPECT_EQ(tucker_synthesize(tf), core);
}

TEST(Tucker, ScalarCoreGivesScaledOuterProduct) {
    Eigen::RowVectorXd a(3), b(2), c(4);
    a << 0.6, 0.8, 0.0;
    b << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    c << 0.5, 0.5, 0.5, 0.5;
    TuckerFactors tf{DenseTensor({1, 1, 1}, {2.0}), {a, b, c}};
    const DenseTensor t = tucker_synthesize(tf);
    ASSERT_EQ(t.shape(), (Shape{3, 2, 4}));
    for (Index i = 0; i < 3; ++i) {
        for (Index j = 0; j < 2; ++j) {
            for (Index k = 0; k < 4; ++k) EXPECT_NEAR(t({i, j, k}), 2.0 * a[i] * b[j] * c[k], 1e-15);
        }
    }
}

namespace {

Eigen::MatrixXd orthonormal_rows(Index r, Index extent, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gp_test::random_matrix(extent, r, rng));
    return (qr.householderQ() * Eigen::MatrixXd::Identity(extent, r)).transpose();
}

TuckerFactors random_tucker(const Shape& ranks, const Shape& extents, std::mt19937_64& rng) {
    TuckerFactors tf;
    const Eigen::MatrixXd c = gp_test::random_matrix(shape_product(ranks), 1, rng);
    tf.core = DenseTensor(ranks, std::vector<double>(c.data(), c.data() + c.size()));
    for (std::size_t k = 0; k < ranks.size(); ++k) tf.factors.push_back(orthonormal_rows(ranks[k], extents[k], rng));
    return tf;
}

} // namespace

TEST(Tucker, MatchesBruteForceMultilinearSum) {
    std::mt19937_64 rng(5);
    const Shape ranks{2, 3, 2}, extents{4, 5, 3};  // 60 entries
    const TuckerFactors tf = random_tucker(ranks, extents, rng);
    const DenseTensor t = tucker_synthesize(tf);
    std::vector<Index> idx(3, 0);
    do {
        double s = 0.0;
        for (Index a = 0; a < ranks[0]; ++a) {
            for (Index b = 0; b < ranks[1]; ++b) {
                for (Index c = 0; c < ranks[2]; ++c) {
                    s += tf.core({a, b, c}) * tf.factors[0](a, idx[0]) * tf.factors[1](b, idx[1]) *
                         tf.factors[2](c, idx[2]);
                }
            }
        }
        EXPECT_NEAR(t(idx), s, 1e-12);
    } while (next_index(idx, extents));
}

TEST(Tucker, UnfoldingRankIsBoundedByCoreRank) {
    std::mt19937_64 rng(8);
    const TuckerFactors tf = random_tucker({2, 2, 3}, {6, 7, 5}, rng);
    const DenseTensor t = tucker_synthesize(tf);
    const Eigen::VectorXd sv = unfolding_singular_values(t, 0);
    // oracle: a full SVD of the explicit unfolding
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matricize(t, 0));
    ASSERT_EQ(sv.size(), svd.singularValues().size());
    EXPECT_LT((sv - svd.singularValues()).norm(), 1e-12 * sv[0]);
    for (Index i = 2; i < sv.size(); ++i) EXPECT_LT(sv[i], 1e-8 * sv[0]);
    EXPECT_EQ(numerical_rank(sv), 2);
    EXPECT_LE(numerical_rank(unfolding_singular_values(t, 1)), 2);
    EXPECT_LE(numerical_rank(unfolding_singular_values(t, 2)), 3);
}

TEST(Tucker, ValidateRejectsBadFactors) {
    TuckerFactors tf{DenseTensor({2}), {Eigen::MatrixXd::Ones(2, 3)}};
    EXPECT_THROW(tf.validate(), Error);
    TuckerFactors wrong_shape{DenseTensor({2}), {Eigen::MatrixXd::Identity(3, 3)}};
    EXPECT_THROW(tucker_synthesize(wrong_shape), Error);
}

TEST(TensorIo, RoundTripIsBitExact) {
    std::mt19937_64 rng(2);
    const Eigen::MatrixXd v = gp_test::random_matrix(30, 1, rng);
    const DenseTensor t({2, 5, 3}, std::vector<double>(v.data(), v.data() + 30));
    std::stringstream ss;
    write_tensor(ss, t);
    EXPECT_EQ(read_tensor(ss), t);
}

TEST(TensorIo, HeaderCarriesShapeAndLayout) {
    std::stringstream ss;
    write_tensor(ss, DenseTensor({2, 1}, {1.0, 2.0}));
    std::string header;
    std::getline(ss, header);
    const auto j = nlohmann::json::parse(header);
    EXPECT_EQ(j["dtype"], "f64");
    EXPECT_EQ(j["layout"], "fiber-fastest");
    EXPECT_EQ(j["shape"], nlohmann::json::array({2, 1}));
}

TEST(TensorIo, RejectsTruncatedPayloadAndBadHeader) {
    std::stringstream ss;
    write_tensor(ss, DenseTensor({4}, {1, 2, 3, 4}));
    std::string s = ss.str();
    s.pop_back();
    std::stringstream truncated(s);
    EXPECT_THROW(read_tensor(truncated), Error);

    std::stringstream bad(R"({"dtype":"f32","layout":"fiber-fastest","shape":[1]})" "\n12345678");
    EXPECT_THROW(read_tensor(bad), Error);
    EXPECT_THROW(read_tensor(std::filesystem::path("/nonexistent/x.tensor")), Error);
}
