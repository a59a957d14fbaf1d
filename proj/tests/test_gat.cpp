#include <doctest.h>

#include "ncagc/gat.hpp"
#include "test_util.hpp"

using namespace ncagc;

namespace {

AttentionLayerParams layer(const Matrix& weight, std::initializer_list<double> attention,
                           Activation activation) {
  AttentionLayerParams p;
  p.weight = weight;
  p.attention.resize(static_cast<Index>(attention.size()));
  Index i = 0;
  for (double a : attention) p.attention[i++] = a;
  p.activation = activation;
  return p;
}

Matrix permute_rows(const Matrix& m, const std::vector<int>& perm) {
  // Row i of the result is row perm[i] of m.
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(perm[i]);
  return out;
}

Adjacency permute_adjacency(const Adjacency& a, const std::vector<int>& perm) {
  const Matrix d(a);
  Matrix out(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) out(i, j) = d(perm[i], perm[j]);
  }
  return out.sparseView();
}

struct GoldenSetup {
  Matrix x;
  Adjacency a;
  AutoencoderParams params;
};

GoldenSetup golden_setup() {
  std::mt19937_64 rng(42);
  GoldenSetup s;
  s.x = testutil::random_matrix(5, 4, rng, 0.0, 1.0);
  s.a = add_self_loops(adjacency_from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 2}}));
  std::mt19937_64 prng(7);
  const std::vector<Index> dims{3, 2};
  s.params = init_autoencoder(4, dims, LayerKind::attention, Activation::prelu, prng);
  return s;
}

}  // namespace

TEST_SUITE("gat") {

TEST_CASE("single node, identity weight, linear activation returns the input") {
  Matrix x(1, 3);
  x << 0.7, -1.2, 3.0;
  const Adjacency a = add_self_loops(Adjacency(1, 1));
  const auto p = layer(Matrix::Identity(3, 3), {0.3, -0.1, 0.2, 0.5, 0.9, -0.4}, Activation::linear);
  LayerCache cache;
  const Matrix out = attention_layer_forward(x, a, p, LayerKind::attention, &cache);
  CHECK(out == x);
  REQUIRE(cache.alpha.size() == 1);
  CHECK(cache.alpha[0] == 1.0);
}

TEST_CASE("isolated nodes only see their own row") {
  std::mt19937_64 rng(3);
  Matrix x = testutil::random_matrix(2, 3, rng);
  const Adjacency a = add_self_loops(Adjacency(2, 2));
  const auto p = layer(testutil::random_matrix(3, 2, rng), {0.4, -0.3, 0.2, 0.6}, Activation::prelu);
  const Matrix before = attention_layer_forward(x, a, p, LayerKind::attention);
  x.row(1) *= -5.0;
  const Matrix after = attention_layer_forward(x, a, p, LayerKind::attention);
  CHECK(after.row(0) == before.row(0));
  CHECK(after.row(1) != before.row(1));
}

TEST_CASE("three-node forward matches the scalar oracle") {
  // values from tests/oracles/attention_forward.py
  Matrix x(3, 2), w(2, 2);
  x << 1, 0.5, -0.3, 0.8, 0.2, -1;
  w << 0.4, -0.2, 0.1, 0.3;
  const Adjacency a = add_self_loops(adjacency_from_edges(3, {{0, 1}, {1, 2}}));
  Matrix prelu(3, 2), linear(3, 2);
  prelu << 0.21442784232047707, 0.11826582691394497, 0.13286882683966716,
      -0.0069014469193537029, -0.0076523111302753801, -0.00012604383118768742;
  linear << 0.21442784232047707, 0.11826582691394497, 0.13286882683966716,
      -0.027605787677414811, -0.03060924452110152, -0.00050417532475074966;
  const auto pp = layer(w, {0.5, -0.4, 0.3, 0.2}, Activation::prelu);
  const auto pl = layer(w, {0.5, -0.4, 0.3, 0.2}, Activation::linear);
  CHECK(testutil::relative_error(attention_layer_forward(x, a, pp, LayerKind::attention), prelu) <
        1e-14);
  CHECK(testutil::relative_error(attention_layer_forward(x, a, pl, LayerKind::attention), linear) <
        1e-14);
}

TEST_CASE("mean aggregation averages the closed neighbourhood") {
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const Adjacency a = add_self_loops(adjacency_from_edges(3, {{0, 1}}));
  const auto p = layer(Matrix::Identity(2, 2), {9, 9, 9, 9}, Activation::linear);
  Matrix expected(3, 2);
  expected << 2, 3, 2, 3, 5, 6;
  CHECK(attention_layer_forward(x, a, p, LayerKind::mean_aggregation).isApprox(expected, 1e-15));
}

TEST_CASE("missing self-loop violates the contract") {
  const Adjacency a = adjacency_from_edges(3, {{0, 1}});
  const auto p = layer(Matrix::Identity(2, 2), {0, 0, 0, 0}, Activation::linear);
  CHECK_THROWS_AS(attention_layer_forward(Matrix::Ones(3, 2), a, p, LayerKind::attention),
                  std::invalid_argument);
  CHECK_THROWS_AS(attention_layer_forward(Matrix::Ones(3, 2), a, p, LayerKind::mean_aggregation),
                  std::invalid_argument);
}

TEST_CASE("attention coefficients are a distribution over each neighbourhood") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Adjacency a = testutil::random_adjacency(12, 0.3, rng, true);
    const auto p = layer(testutil::random_matrix(5, 3, rng, -2, 2), {0.9, -1.1, 0.4, 1.3, -0.7, 0.2},
                         Activation::elu);
    LayerCache cache;
    attention_layer_forward(testutil::random_matrix(12, 5, rng), a, p, LayerKind::attention, &cache);
    for (Index i = 0; i < 12; ++i) {
      double total = 0.0;
      for (int e = a.outerIndexPtr()[i]; e < a.outerIndexPtr()[i + 1]; ++e) {
        CHECK(cache.alpha[e] >= 0.0);
        total += cache.alpha[e];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("initialization shapes and ranges") {
  std::mt19937_64 rng(1);
  const std::vector<Index> dims{6, 4};
  const auto p = init_autoencoder(10, dims, LayerKind::attention, Activation::prelu, rng);
  REQUIRE(p.encoder.size() == 2);
  REQUIRE(p.decoder.size() == 2);
  CHECK(p.encoder[0].weight.rows() == 10);
  CHECK(p.encoder[0].weight.cols() == 6);
  CHECK(p.encoder[1].weight.cols() == 4);
  CHECK(p.decoder[0].weight.rows() == 4);
  CHECK(p.decoder[0].weight.cols() == 6);
  CHECK(p.decoder[1].weight.cols() == 10);
  CHECK(p.input_dim() == 10);
  CHECK(p.latent_dim() == 4);
  for (const auto* layers : {&p.encoder, &p.decoder}) {
    for (const auto& l : *layers) {
      CHECK(l.attention.size() == 2 * l.output_dim());
      CHECK(l.prelu_slope == 0.25);
      const double limit = std::sqrt(6.0 / static_cast<double>(l.input_dim() + l.output_dim()));
      CHECK(l.weight.cwiseAbs().maxCoeff() <= limit);
      CHECK(l.all_finite());
    }
  }
  std::mt19937_64 rng2(1);
  CHECK_THROWS_AS(init_autoencoder(10, std::vector<Index>{}, LayerKind::attention,
                                   Activation::prelu, rng2),
                  ConfigError);
  CHECK_THROWS_AS(init_autoencoder(10, std::vector<Index>{4, 0}, LayerKind::attention,
                                   Activation::prelu, rng2),
                  ConfigError);
}

TEST_CASE("zero attributes with zero PReLU slope encode to zero") {
  std::mt19937_64 rng(4);
  const std::vector<Index> dims{5, 3};
  auto p = init_autoencoder(6, dims, LayerKind::attention, Activation::prelu, rng);
  for (auto& l : p.encoder) l.prelu_slope = 0.0;
  for (auto& l : p.decoder) l.prelu_slope = 0.0;
  const Adjacency a = testutil::random_adjacency(7, 0.4, rng, true);
  const Matrix z = encode(Matrix::Zero(7, 6), a, p);
  CHECK(z.rows() == 7);
  CHECK(z.cols() == 3);
  CHECK(z.isZero(0.0));
  const Matrix xhat = decode(Matrix::Zero(7, 3), a, p);
  CHECK(xhat.rows() == 7);
  CHECK(xhat.cols() == 6);
  CHECK(xhat.isZero(0.0));
}

TEST_CASE("a one-node graph encodes to a 1 x dz matrix") {
  std::mt19937_64 rng(8);
  const std::vector<Index> dims{4, 2};
  const auto p = init_autoencoder(3, dims, LayerKind::attention, Activation::prelu, rng);
  Graph g;
  g.attributes = testutil::random_matrix(1, 3, rng);
  g.adjacency = add_self_loops(Adjacency(1, 1));
  const Matrix z = encode(g, p);
  CHECK(z.rows() == 1);
  CHECK(z.cols() == 2);
  CHECK(decode(z, g, p).cols() == 3);
}

TEST_CASE("golden encode and decode on a fixed-seed five-node graph") {
  // Pinned from the first verified run of this implementation.
  const GoldenSetup s = golden_setup();
  Matrix z(5, 2);
  z << 1.2770493814715453, -0.16731078045029485, 1.2770493814715453, -0.16731078045029485,
      1.2537481382179128, -0.16140282638960132, 1.3451092269943643, -0.16918612971818481,
      1.3177692616546186, -0.16071671865073903;
  Matrix xhat(5, 4);
  xhat << -0.20900736688632021, 0.12039293997127901, -0.006916925024178934, -0.12833165556484502,
      -0.20900736688632021, 0.12039293997127901, -0.006916925024178934, -0.12833165556484502,
      -0.20981383827877492, 0.12096623522189152, -0.006990153132966196, -0.12884713022874067,
      -0.21295833255891325, 0.12303875818214352, -0.0072060063073459387, -0.13082662112343685,
      -0.21404650052442395, 0.12381305656945479, -0.0073051352537318627, -0.13152228930523827;
  const Matrix got_z = encode(s.x, s.a, s.params);
  CHECK(testutil::relative_error(got_z, z) < 1e-13);
  CHECK(testutil::relative_error(decode(got_z, s.a, s.params), xhat) < 1e-13);
}

TEST_CASE("non-finite activations name the layer") {
  GoldenSetup s = golden_setup();
  s.x(2, 1) = std::numeric_limits<double>::quiet_NaN();
  try {
    encode(s.x, s.a, s.params);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("encoder layer 0") != std::string::npos);
  }
  Matrix z = Matrix::Ones(5, 2);
  z(0, 0) = std::numeric_limits<double>::infinity();
  try {
    decode(z, s.a, s.params);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("decoder layer 0") != std::string::npos);
  }
}

TEST_CASE("property: encode is permutation equivariant") {
  std::mt19937_64 rng(123);
  for (LayerKind kind : {LayerKind::attention, LayerKind::mean_aggregation}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Index n = 10;
      const Matrix x = testutil::random_matrix(n, 6, rng);
      const Adjacency a = testutil::random_adjacency(n, 0.35, rng, true);
      const std::vector<Index> dims{5, 3};
      const auto p = init_autoencoder(6, dims, kind, Activation::prelu, rng);
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      const Matrix z = encode(x, a, p);
      const Matrix zp = encode(permute_rows(x, perm), permute_adjacency(a, perm), p);
      // Neighbour sums run in a different order after relabeling, so agreement is to
      // rounding, not bit-for-bit.
      CHECK(testutil::relative_error(zp, permute_rows(z, perm)) < 1e-13);
    }
  }
}

TEST_CASE("names parse") {
  for (auto a : {Activation::prelu, Activation::elu, Activation::linear}) {
    CHECK(parse_activation(to_string(a)) == a);
  }
  for (auto k : {LayerKind::attention, LayerKind::mean_aggregation}) {
    CHECK(parse_layer_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_activation("relu6"), ConfigError);
  CHECK_THROWS_AS(parse_layer_kind("gin"), ConfigError);
}

}  // TEST_SUITE
