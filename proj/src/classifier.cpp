#include "binfm/classifier.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "binfm/binfm.hpp"
#include "binfm/error.hpp"
#include "binfm/ovr.hpp"

namespace binfm {

namespace {

constexpr char kFloatMagic[4] = {'F', 'F', 'M', '1'};
constexpr char kLabelMagic[4] = {'B', 'F', 'M', 'L'};
constexpr std::uint32_t kFloatVersion = 1;
constexpr std::uint32_t kLabelVersion = 1;

void write_float_record(std::ostream& out, ModelKind kind, const FmModel& head, std::size_t d,
                        const std::optional<BinningSpec>& spec) {
  out.write(kFloatMagic, 4);
  io::put_u32(out, kFloatVersion);
  io::put_u32(out, static_cast<std::uint32_t>(kind));
  io::put_u64(out, head.p);
  io::put_u64(out, head.m);
  io::put_u64(out, d);
  io::put_u64(out, spec ? spec->b : 0);
  if (spec) io::put_spec(out, *spec);
  for (double w : head.w) io::put_f64(out, w);
  for (double v : head.v) io::put_f64(out, v);
}

struct FloatRecord {
  ModelKind kind;
  std::size_t d;
  std::optional<BinningSpec> spec;
  FmModel head;
};

// Reads the remainder of an FFM1 record whose magic was already consumed.
FloatRecord read_float_record(std::istream& in) {
  if (const std::uint32_t version = io::get_u32(in); version != kFloatVersion)
    throw Error(ErrorKind::format, "unsupported FFM1 version " + std::to_string(version));
  const std::uint32_t kind_tag = io::get_u32(in);
  if (kind_tag > 1) throw Error(ErrorKind::format, "FFM1: unknown model kind");
  FloatRecord r{static_cast<ModelKind>(kind_tag), 0, std::nullopt, {}};
  const std::size_t p = io::get_size(in);
  const std::size_t m = io::get_size(in);
  r.d = io::get_size(in);
  const std::size_t b = io::get_size(in);
  if (m < 1 || r.d < 1 || p > io::kMaxWords || m > io::kMaxDim || p * m > io::kMaxWords)
    throw Error(ErrorKind::format, "FFM1: invalid dimensions");
  if (r.kind == ModelKind::fm) {
    if (b != 0 || p != r.d) throw Error(ErrorKind::format, "FFM1: dimension inconsistency");
  } else {
    if (b < 2 || r.d > io::kMaxDim || p != r.d * b) throw Error(ErrorKind::format, "FFM1: dimension inconsistency (p != d * b)");
    r.spec = io::get_spec(in, r.d, b);
  }
  r.head = FmModel(p, m);
  for (double& w : r.head.w) w = io::get_f64(in);
  for (double& v : r.head.v) v = io::get_f64(in);
  for (double w : r.head.w)
    if (!std::isfinite(w)) throw Error(ErrorKind::format, "FFM1: non-finite coefficient");
  for (double v : r.head.v)
    if (!std::isfinite(v)) throw Error(ErrorKind::format, "FFM1: non-finite coefficient");
  return r;
}

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
  if (name == "fm") return ModelKind::fm;
  if (name == "sefm") return ModelKind::sefm;
  if (name == "binfm") return ModelKind::binfm;
  throw Error(ErrorKind::usage, "unknown model kind '" + std::string(name) + "'");
}

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::fm: return "fm";
    case ModelKind::sefm: return "sefm";
    case ModelKind::binfm: return "binfm";
  }
  return "?";
}

void validate(const ClassifierOptions& opts) {
  validate(opts.train);
  if (opts.kind != ModelKind::fm && opts.bins < 2) throw Error(ErrorKind::usage, "number of bins must be >= 2");
  if (opts.jobs < 1) throw Error(ErrorKind::usage, "jobs must be >= 1");
}

Classifier Classifier::fit(const Dataset& train, const ClassifierOptions& opts) {
  validate(opts);
  validate(train);
  if (train.empty()) throw Error(ErrorKind::data, "cannot train on an empty dataset");
  std::vector<std::int32_t> labels;
  labels.reserve(train.size());
  for (const Sample& s : train.samples) labels.push_back(s.label);
  require_all_classes(labels, train.classes);

  Classifier c;
  c.kind_ = opts.kind;
  c.d_ = train.dim;
  c.label_values_ = train.label_values;
  const std::size_t heads = ovr_head_count(train.classes);
  c.histories_.resize(heads);

  auto fit_fm_heads = [&](const Dataset& data, std::size_t p) {
    c.fm_heads_.resize(heads);
    for_each_head(heads, opts.jobs, [&](std::size_t h) {
      TrainOptions head_opts = opts.train;
      head_opts.seed = opts.train.seed + h;
      const auto targets = ovr_targets(labels, train.classes, h);
      auto r = fm_train(data, targets, p, head_opts);
      c.fm_heads_[h] = std::move(r.model);
      c.histories_[h] = std::move(r.loss_history);
    });
  };

  switch (opts.kind) {
    case ModelKind::fm:
      fit_fm_heads(train, train.dim);
      break;
    case ModelKind::sefm: {
      c.spec_ = fit_bins(train, opts.bins, opts.strategy);
      fit_fm_heads(to_sparse(encode_dataset(*c.spec_, train)), c.spec_->p());
      break;
    }
    case ModelKind::binfm: {
      c.spec_ = fit_bins(train, opts.bins, opts.strategy);
      OvrBinFm ovr = train_ovr(encode_dataset(*c.spec_, train), opts.train, opts.jobs);
      for (const BinFmModel& h : ovr.heads) c.packed_heads_.push_back(pack(h, *c.spec_));
      c.histories_ = std::move(ovr.loss_histories);
      break;
    }
  }
  return c;
}

std::size_t Classifier::rank() const noexcept {
  if (!fm_heads_.empty()) return fm_heads_.front().m;
  if (!packed_heads_.empty()) return packed_heads_.front().m;
  return 0;
}

std::size_t Classifier::head_count() const noexcept {
  return kind_ == ModelKind::binfm ? packed_heads_.size() : fm_heads_.size();
}

void Classifier::check_compatible(const Dataset& ds) const {
  if (ds.dim > d_) {
    throw Error(ErrorKind::data, "data has " + std::to_string(ds.dim) + " features but the model was trained on " +
                                     std::to_string(d_));
  }
}

std::vector<double> Classifier::head_scores(std::span<const Feature> x) const {
  if (!x.empty() && x.back().index >= d_) throw Error(ErrorKind::data, "feature index beyond the model's input dimensionality");
  std::vector<double> scores;
  scores.reserve(head_count());
  switch (kind_) {
    case ModelKind::fm:
      for (const FmModel& h : fm_heads_) scores.push_back(fm_predict(h, x));
      break;
    case ModelKind::sefm: {
      std::vector<std::uint32_t> active(spec_->d);
      encode_into(*spec_, x, active);
      std::vector<Feature> onehot;
      onehot.reserve(active.size());
      for (std::uint32_t j : active) onehot.push_back({j, 1.0});
      for (const FmModel& h : fm_heads_) scores.push_back(fm_predict(h, onehot));
      break;
    }
    case ModelKind::binfm: {
      std::vector<std::uint32_t> active(spec_->d);
      encode_into(*spec_, x, active);
      const ActiveMask mask(active, spec_->p());
      for (const PackedModel& h : packed_heads_) scores.push_back(popcount_predict(h, mask));
      break;
    }
  }
  return scores;
}

std::int32_t Classifier::predict(std::span<const Feature> x) const { return ovr_decide(head_scores(x)); }

double Classifier::accuracy(const Dataset& ds) const {
  check_compatible(ds);
  if (ds.empty()) throw Error(ErrorKind::data, "accuracy of an empty dataset is undefined");
  std::size_t correct = 0;
  for (const Sample& s : ds.samples) {
    const double predicted = label_values_[static_cast<std::size_t>(predict(s.features))];
    if (predicted == ds.label_values.at(static_cast<std::size_t>(s.label))) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

void Classifier::write(std::ostream& out) const {
  if (kind_ == ModelKind::binfm) {
    for (const PackedModel& h : packed_heads_) write_packed(out, h);
  } else {
    for (const FmModel& h : fm_heads_) write_float_record(out, kind_, h, d_, spec_);
  }
  out.write(kLabelMagic, 4);
  io::put_u32(out, kLabelVersion);
  io::put_u64(out, label_values_.size());
  for (double v : label_values_) io::put_f64(out, v);
}

Classifier Classifier::read(std::istream& in) {
  Classifier c;
  bool have_kind = false;
  for (;;) {
    char magic[4];
    io::get_bytes(in, magic, 4);
    if (std::memcmp(magic, kLabelMagic, 4) == 0) break;
    if (std::memcmp(magic, kPackedMagic, 4) == 0) {
      if (have_kind && c.kind_ != ModelKind::binfm) throw Error(ErrorKind::format, "mixed record kinds in model file");
      in.seekg(-4, std::ios::cur);
      PackedModel pm = read_packed(in);
      if (!c.packed_heads_.empty()) {
        const PackedModel& first = c.packed_heads_.front();
        if (pm.m != first.m || !(pm.spec == first.spec)) throw Error(ErrorKind::format, "inconsistent heads in model file");
      }
      c.kind_ = ModelKind::binfm;
      c.d_ = pm.d;
      c.spec_ = pm.spec;
      c.packed_heads_.push_back(std::move(pm));
    } else if (std::memcmp(magic, kFloatMagic, 4) == 0) {
      FloatRecord r = read_float_record(in);
      if (have_kind && c.kind_ != r.kind) throw Error(ErrorKind::format, "mixed record kinds in model file");
      if (!c.fm_heads_.empty()) {
        const FmModel& first = c.fm_heads_.front();
        if (r.head.m != first.m || r.head.p != first.p || r.d != c.d_ || r.spec != c.spec_)
          throw Error(ErrorKind::format, "inconsistent heads in model file");
      }
      c.kind_ = r.kind;
      c.d_ = r.d;
      c.spec_ = std::move(r.spec);
      c.fm_heads_.push_back(std::move(r.head));
    } else {
      throw Error(ErrorKind::format, "unrecognized record in model file (bad magic)");
    }
    have_kind = true;
  }
  if (!have_kind) throw Error(ErrorKind::format, "model file holds no heads");
  if (const std::uint32_t version = io::get_u32(in); version != kLabelVersion)
    throw Error(ErrorKind::format, "unsupported label table version " + std::to_string(version));
  const std::size_t classes = io::get_size(in);
  if (classes < 2 || classes > io::kMaxWords) throw Error(ErrorKind::format, "label table: invalid class count");
  c.label_values_.resize(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    const double v = io::get_f64(in);
    if (!std::isfinite(v) || (k > 0 && v <= c.label_values_[k - 1]))
      throw Error(ErrorKind::format, "label table: values must be finite and strictly increasing");
    c.label_values_[k] = v;
  }
  if (c.head_count() != ovr_head_count(classes))
    throw Error(ErrorKind::format, "head count does not match the number of classes");
  return c;
}

void Classifier::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  write(out);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Classifier Classifier::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read(in);
}

std::size_t Classifier::serialized_bytes() const {
  std::ostringstream buf(std::ios::binary);
  write(buf);
  return buf.str().size();
}

std::size_t Classifier::parameter_bits() const noexcept {
  std::size_t bits = 0;
  for (const FmModel& h : fm_heads_) bits += 32 * (h.p + h.p * h.m);
  for (const PackedModel& h : packed_heads_) bits += sign_payload_bits(h);
  return bits;
}

}  // namespace binfm
