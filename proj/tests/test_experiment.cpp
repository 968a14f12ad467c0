// Copyright 2026 the rramnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rramnet/errors.hpp"
#include "rramnet/experiment.hpp"
#include "rramnet/rng.hpp"
#include "rramnet/snapshot.hpp"
#include "test_util.hpp"

using namespace rramnet;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.anl = 0.0;
  cfg.weight_bits = 8;
  cfg.activation = ActivationKind::Sigmoid;
  cfg.eta = 20.0;
  cfg.hidden = 16;
  cfg.quant_enabled = true;
  cfg.neuron_bits = 8;
  cfg.epochs = 2;
  cfg.batch = 10;
  cfg.seed = 5;
  cfg.calibration_samples = 100;
  return cfg;
}

}  // namespace

TEST_CASE("zero learning rate leaves the network bit-identical") {
  const auto ds = testutil::synthetic_dataset(120);
  auto cfg = tiny_config();
  cfg.eta = 0.0;
  cfg.epochs = 3;
  const auto res = train(cfg, ds, ds, nullptr);
  const auto fresh =
      init_network(make_network_config(res.resolved),
                   rng::derive_seed(cfg.seed, rng::Stream::NetworkInit, 0));
  CHECK(res.net.layer1.g == fresh.layer1.g);
  CHECK(res.net.layer2.g == fresh.layer2.g);
  CHECK(res.record.epochs.size() == 3);
  for (const auto& st : res.record.epochs) CHECK(st.update_sparsity == 100.0);
}

TEST_CASE("zero epochs produce an empty record and the initial network") {
  const auto ds = testutil::synthetic_dataset(60);
  auto cfg = tiny_config();
  cfg.epochs = 0;
  const auto res = train(cfg, ds, ds, nullptr);
  CHECK(res.record.epochs.empty());
  CHECK(res.steps == 0);
  const auto fresh =
      init_network(make_network_config(res.resolved),
                   rng::derive_seed(cfg.seed, rng::Stream::NetworkInit, 0));
  CHECK(res.net.layer1.g == fresh.layer1.g);
}

TEST_CASE("training is deterministic given the seed") {
  const auto ds = testutil::synthetic_dataset(150);
  const auto cfg = tiny_config();
  const auto a = train(cfg, ds, ds, nullptr);
  const auto b = train(cfg, ds, ds, nullptr);
  CHECK(a.net.layer1.g == b.net.layer1.g);
  CHECK(a.net.layer2.g == b.net.layer2.g);
  REQUIRE(a.record.epochs.size() == b.record.epochs.size());
  for (std::size_t i = 0; i < a.record.epochs.size(); ++i) {
    CHECK(a.record.epochs[i].train_mse == b.record.epochs[i].train_mse);
    CHECK(a.record.epochs[i].test_accuracy == b.record.epochs[i].test_accuracy);
    CHECK(a.record.epochs[i].hidden_sparsity == b.record.epochs[i].hidden_sparsity);
    CHECK(a.record.epochs[i].update_sparsity == b.record.epochs[i].update_sparsity);
  }
  std::ostringstream csv_a, csv_b;
  std::vector<SweepCell> cell_a(1), cell_b(1);
  cell_a[0].config = a.resolved;
  cell_a[0].record = a.record;
  cell_b[0].config = b.resolved;
  cell_b[0].record = b.record;
  write_results_csv(csv_a, cell_a);
  write_results_csv(csv_b, cell_b);
  CHECK(csv_a.str() == csv_b.str());
}

TEST_CASE("training learns the synthetic band classes") {
  const auto ds = testutil::synthetic_dataset(400);
  auto cfg = tiny_config();
  cfg.epochs = 6;
  const auto res = train(cfg, ds, ds, nullptr);
  CHECK(res.record.epochs.back().test_accuracy > 80.0);
  CHECK(res.steps == 6u * 40u);
  // bounded weights after training
  CHECK(res.net.layer1.g.minCoeff() >= 0.0);
  CHECK(res.net.layer1.g.maxCoeff() <= 1.0);
  CHECK(res.net.layer2.g.minCoeff() >= 0.0);
  CHECK(res.net.layer2.g.maxCoeff() <= 1.0);
}

TEST_CASE("training mse is non-increasing in reference mode, small upticks allowed") {
  auto cfg = tiny_config();
  cfg.quant_enabled = false;
  cfg.eta = 20.0;
  cfg.epochs = 5;
  const auto ds = testutil::synthetic_dataset(300, 10, 1, false);
  const auto res = train(cfg, ds, ds, nullptr);
  REQUIRE(res.record.epochs.size() == 5);
  for (std::size_t i = 1; i < res.record.epochs.size(); ++i) {
    CHECK(res.record.epochs[i].train_mse <=
          res.record.epochs[i - 1].train_mse * 1.05);
  }
}

TEST_CASE("eval cadence controls which epochs are recorded") {
  const auto ds = testutil::synthetic_dataset(100);
  auto cfg = tiny_config();
  cfg.epochs = 5;
  cfg.eval_cadence = 2;
  const auto res = train(cfg, ds, ds, nullptr);
  REQUIRE(res.record.epochs.size() == 3);
  CHECK(res.record.epochs[0].epoch == 2);
  CHECK(res.record.epochs[1].epoch == 4);
  CHECK(res.record.epochs[2].epoch == 5);  // final epoch always recorded
}

TEST_CASE("a zero-weight network predicts the lowest class index everywhere") {
  auto cfg = tiny_config();
  auto net = init_network(make_network_config(resolve_config(
                              cfg, testutil::synthetic_dataset(50))),
                          1);
  net.layer1.g.setConstant(net.layer1.g_ref);
  net.layer2.g.setConstant(net.layer2.g_ref);
  // 60 samples, labels 0..9 equally frequent: only label 0 matches
  const auto ds = testutil::synthetic_dataset(60);
  CHECK(evaluate(net, ds) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("a perfect lookup network scores 100 percent") {
  // images light band L, network wired band -> hidden unit -> output L
  auto cfg = tiny_config();
  cfg.hidden = 10;
  const auto ds = testutil::synthetic_dataset(80);
  auto net = init_network(make_network_config(resolve_config(cfg, ds)), 1);
  net.layer1.g.setConstant(net.layer1.g_ref);
  net.layer2.g.setConstant(net.layer2.g_ref);
  for (int band = 0; band < 10; ++band) {
    for (int i = band * 78; i < (band + 1) * 78; ++i) net.layer1.g(i, band) = 1.0;
    net.layer2.g(band, band) = 1.0;
  }
  CHECK(evaluate(net, ds) == 100.0);
}

TEST_CASE("accuracy is invariant under test-set permutation") {
  const auto ds = testutil::synthetic_dataset(90);
  auto cfg = tiny_config();
  cfg.epochs = 2;
  const auto res = train(cfg, ds, ds, nullptr);
  Dataset shuffled = ds;
  const auto order = epoch_permutation(static_cast<int>(ds.size()), 9, 0);
  for (Eigen::Index j = 0; j < ds.size(); ++j) {
    shuffled.images.col(j) = ds.images.col(order[static_cast<std::size_t>(j)]);
    shuffled.labels[static_cast<std::size_t>(j)] =
        ds.labels[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
  }
  CHECK(evaluate(res.net, ds) == evaluate(res.net, shuffled));
}

TEST_CASE("hidden sparsity reads all-inactive and never-zero cases") {
  auto cfg = tiny_config();
  cfg.activation = ActivationKind::Relu;
  cfg.shift = 1000.0;  // shift beyond any weighted sum: everything inactive
  cfg.upper_bound = 8.0;
  cfg.backprop_bound = 0.25;
  const auto ds = testutil::synthetic_dataset(40);
  auto net = init_network(make_network_config(resolve_config(cfg, ds)), 2);
  CHECK(hidden_sparsity(net, ds) == 100.0);

  auto cfg2 = tiny_config();
  cfg2.quant_enabled = false;  // full-precision sigmoid is never exactly zero
  auto net2 = init_network(make_network_config(resolve_config(cfg2, ds)), 2);
  CHECK(hidden_sparsity(net2, ds) == 0.0);
}

TEST_CASE("weight histograms cover the representable range exactly") {
  const auto dev = DeviceParams<double>::ideal_linear(0.0, 1.0, 255);
  auto arr = SynapseArray<double>::constant(50, 40, dev, dev.g_ref());
  const auto spike = weight_histogram(arr, 64);
  REQUIRE(spike.edges.size() == 65);
  CHECK(spike.edges.front() == -0.5);
  CHECK(spike.edges.back() == 0.5);
  long total = 0;
  int nonzero_bins = 0;
  for (std::size_t b = 0; b < spike.counts.size(); ++b) {
    total += spike.counts[b];
    if (spike.counts[b] != 0) ++nonzero_bins;
  }
  CHECK(total == 50 * 40);
  CHECK(nonzero_bins == 1);  // all weights at zero: a single spike

  rng::Engine eng(7);
  const auto uni = SynapseArray<double>::uniform(400, 300, dev, eng);
  const auto flat = weight_histogram(uni, 20);
  const double expect = 400.0 * 300.0 / 20.0;
  for (long c : flat.counts) {
    CHECK(std::abs(static_cast<double>(c) - expect) < 0.15 * expect);
  }
  CHECK_THROWS_AS(weight_histogram(uni, 0), std::invalid_argument);
}

TEST_CASE("update sparsity in the record matches an independent recount") {
  const auto ds = testutil::synthetic_dataset(100);
  auto cfg = tiny_config();
  cfg.epochs = 1;
  cfg.batch = 20;
  const auto res = train(cfg, ds, ds, nullptr);

  // replay the epoch with the library primitives, counting zeros directly
  const auto resolved = res.resolved;
  auto net = init_network(make_network_config(resolved),
                          rng::derive_seed(resolved.seed, rng::Stream::NetworkInit, 0));
  const auto batches =
      minibatches(static_cast<int>(ds.size()), resolved.batch, resolved.seed, 1);
  long long zeros = 0, total = 0;
  for (const auto& batch : batches) {
    Eigen::MatrixXd x(784, batch.size()), t = Eigen::MatrixXd::Zero(10, batch.size());
    for (std::size_t c = 0; c < batch.size(); ++c) {
      x.col(static_cast<Eigen::Index>(c)) = ds.images.col(batch[c]);
      t(ds.labels[static_cast<std::size_t>(batch[c])], static_cast<Eigen::Index>(c)) = 1.0;
    }
    const auto tr = forward(net, x);
    const auto bp = backward(net, tr, t);
    const auto upd = compute_pulse_updates(net, tr, bp);
    zeros += (upd.dn1.array() == 0).count() + (upd.dn2.array() == 0).count();
    total += upd.dn1.size() + upd.dn2.size();
    update_weights(net, upd);
  }
  const double expect = 100.0 * static_cast<double>(zeros) / static_cast<double>(total);
  CHECK(res.record.epochs.back().update_sparsity == doctest::Approx(expect).epsilon(1e-12));
  CHECK(net.layer1.g == res.net.layer1.g);  // replay reproduces the run
}

TEST_CASE("calibration honors explicit bounds and rounds to powers of two") {
  const auto ds = testutil::synthetic_dataset(200);
  auto cfg = tiny_config();
  cfg.activation = ActivationKind::Relu;
  cfg.upper_bound = 0.0;
  cfg.backprop_bound = 0.0;
  const auto resolved = resolve_config(cfg, ds);
  CHECK(resolved.upper_bound > 0.0);
  CHECK(resolved.backprop_bound > 0.0);
  const double lub = std::log2(resolved.upper_bound);
  const double lbp = std::log2(resolved.backprop_bound);
  CHECK(lub == std::floor(lub));
  CHECK(lbp == std::floor(lbp));

  cfg.upper_bound = 16.0;
  cfg.backprop_bound = 0.5;
  const auto kept = resolve_config(cfg, ds);
  CHECK(kept.upper_bound == 16.0);
  CHECK(kept.backprop_bound == 0.5);

  // reference mode: relu left unbounded
  cfg.quant_enabled = false;
  cfg.upper_bound = 0.0;
  const auto ref = resolve_config(cfg, ds);
  CHECK(std::isinf(ref.upper_bound));
}

TEST_CASE("non-finite inputs abort with epoch, batch and layer diagnostics") {
  auto ds = testutil::synthetic_dataset(40);
  ds.images(5, 3) = std::numeric_limits<double>::quiet_NaN();
  auto cfg = tiny_config();
  cfg.epochs = 1;
  cfg.batch = 40;
  cfg.quant_enabled = false;
  try {
    train(cfg, ds, ds, nullptr);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.epoch == 1);
    CHECK(e.batch == 0);
    CHECK(e.layer == "layer1 forward");
  }
}

TEST_CASE("single-point sweep equals a train run with the derived cell seed") {
  const auto ds_train = testutil::synthetic_dataset(120);
  auto cfg = tiny_config();
  cfg.epochs = 2;

  // raw dataset matching the synthetic one so sweep can requantize it
  std::vector<std::vector<std::uint8_t>> imgs;
  std::vector<std::uint8_t> labs;
  for (Eigen::Index j = 0; j < ds_train.size(); ++j) {
    std::vector<std::uint8_t> img(784);
    for (int i = 0; i < 784; ++i) {
      img[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(std::lround(ds_train.images(i, j) * 255.0));
    }
    imgs.push_back(std::move(img));
    labs.push_back(ds_train.labels[static_cast<std::size_t>(j)]);
  }
  const auto img_path = testutil::write_file("sweep-images", testutil::idx_images_bytes(imgs));
  const auto lab_path = testutil::write_file("sweep-labels", testutil::idx_labels_bytes(labs));
  const RawDataset raw = load_idx(img_path, lab_path);

  const auto cells = sweep(cfg, {}, raw, raw, 1, nullptr);
  REQUIRE(cells.size() == 1);

  QuantSpec<double> q;
  q.neuron_bits = cfg.neuron_bits;
  q.enabled = cfg.quant_enabled;
  const Dataset requant = normalize_quantize(raw, q, Split::Train);
  ExperimentConfig direct = cfg;
  direct.seed = rng::derive_seed(cfg.seed, rng::Stream::SweepCell, 0);
  const auto res = train(direct, requant, requant, nullptr);
  REQUIRE(cells[0].record.epochs.size() == res.record.epochs.size());
  for (std::size_t i = 0; i < res.record.epochs.size(); ++i) {
    CHECK(cells[0].record.epochs[i].test_accuracy == res.record.epochs[i].test_accuracy);
    CHECK(cells[0].record.epochs[i].train_mse == res.record.epochs[i].train_mse);
  }

  // axis expansion: 2x3 grid in row-major order with the rightmost fastest
  std::vector<SweepAxis> axes = {{"net.eta", {"5", "10"}}, {"net.s", {"0", "1", "2"}}};
  const auto grid = sweep(cfg, axes, raw, raw, 2, nullptr);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].config.eta == 5.0);
  CHECK(grid[0].config.shift == 0.0);
  CHECK(grid[1].config.shift == 1.0);
  CHECK(grid[3].config.eta == 10.0);
  for (int i = 0; i < 6; ++i) CHECK(grid[static_cast<std::size_t>(i)].run_id == i);

  CHECK_THROWS_AS(sweep(cfg, {{"net.eta", {}}}, raw, raw, 1, nullptr), ConfigError);
}

TEST_CASE("results csv carries the schema header and six-significant-digit floats") {
  const auto ds = testutil::synthetic_dataset(60);
  auto cfg = tiny_config();
  cfg.epochs = 1;
  const auto res = train(cfg, ds, ds, nullptr);
  std::vector<SweepCell> cells(1);
  cells[0].run_id = 3;
  cells[0].config = res.resolved;
  cells[0].record = res.record;
  std::ostringstream os;
  write_results_csv(os, cells);
  const std::string csv = os.str();
  CHECK(csv.rfind("run_id,anl,activation,s,th,weight_bits,neuron_bits,eta,batch,seed,epoch,"
                  "train_mse,test_acc,hidden_sparsity,update_sparsity\n",
                  0) == 0);
  CHECK(csv.find("\n3,0,sigmoid,0,0,8,8,20,10,5,1,") != std::string::npos);
}

TEST_CASE("histogram csv pairs bin edges with both layers") {
  const auto dev = DeviceParams<double>::ideal_linear(0.0, 1.0, 255);
  const auto arr = SynapseArray<double>::constant(4, 4, dev, 0.5);
  const auto h = weight_histogram(arr, 4);
  std::ostringstream os;
  write_histogram_csv(os, h, h);
  const std::string csv = os.str();
  CHECK(csv.rfind("bin_lo,bin_hi,count_layer1,count_layer2\n", 0) == 0);
  CHECK(csv.find("-0.5,-0.25,0,0") != std::string::npos);
  CHECK(csv.find("0,0.25,16,16") != std::string::npos);
}

TEST_CASE("snapshots round-trip the network and its config") {
  const auto ds = testutil::synthetic_dataset(80);
  auto cfg = tiny_config();
  cfg.epochs = 1;
  const auto res = train(cfg, ds, ds, nullptr);
  const auto path = (testutil::temp_dir() / "net.snap").string();
  save_snapshot(path, make_snapshot(res.net, res.resolved, res.steps));
  const Snapshot snap = load_snapshot(path);
  CHECK(snap.steps == res.steps);
  CHECK(snap.seed == res.resolved.seed);
  CHECK(snap.g1 == res.net.layer1.g);
  CHECK(snap.g2 == res.net.layer2.g);
  const auto net = network_from_snapshot(snap);
  CHECK(evaluate(net, ds) == evaluate(res.net, ds));
  CHECK(parse_config_text(snap.config_echo, "echo") == res.resolved);

  const auto bad = testutil::write_file("not-a-snap", "garbage");
  CHECK_THROWS_AS(load_snapshot(bad), DataError);
}
