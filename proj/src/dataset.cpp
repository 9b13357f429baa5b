#include "oho/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "oho/errors.hpp"

namespace oho {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  return buf;
}

// Sequential big-endian reader that reports the offset of the first byte it
// could not deliver.
struct BeReader {
  const std::vector<std::uint8_t>& buf;
  const std::string& path;
  std::size_t cursor = 0;

  std::uint32_t u32(const char* what) {
    if (cursor + 4 > buf.size())
      throw ParseError(path + ": truncated while reading " + std::string(what), buf.size());
    std::uint32_t v = (static_cast<std::uint32_t>(buf[cursor]) << 24) |
                      (static_cast<std::uint32_t>(buf[cursor + 1]) << 16) |
                      (static_cast<std::uint32_t>(buf[cursor + 2]) << 8) |
                      static_cast<std::uint32_t>(buf[cursor + 3]);
    cursor += 4;
    return v;
  }

  const std::uint8_t* bytes(std::size_t n, const char* what) {
    if (cursor + n > buf.size())
      throw ParseError(path + ": truncated while reading " + std::string(what), buf.size());
    const std::uint8_t* p = buf.data() + cursor;
    cursor += n;
    return p;
  }

  void expect_end() {
    if (cursor != buf.size())
      throw ParseError(path + ": " + std::to_string(buf.size() - cursor) +
                           " unexpected trailing bytes",
                       cursor);
  }
};

void be_append(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace

Minibatch load_idx(const std::string& images_path, const std::string& labels_path) {
  const auto ibuf = read_file(images_path);
  BeReader ir{ibuf, images_path};
  const std::uint32_t imagic = ir.u32("magic");
  if (imagic != kImagesMagic) {
    char hex[16];
    std::snprintf(hex, sizeof(hex), "0x%08x", imagic);
    throw ParseError(images_path + ": bad magic " + hex + ", expected 0x00000803", 0);
  }
  const std::uint32_t n = ir.u32("image count");
  const std::uint32_t rows = ir.u32("image rows");
  const std::uint32_t cols = ir.u32("image cols");
  const std::size_t pixels_per = static_cast<std::size_t>(rows) * cols;
  const std::uint8_t* pixels = ir.bytes(static_cast<std::size_t>(n) * pixels_per, "image payload");
  ir.expect_end();

  const auto lbuf = read_file(labels_path);
  BeReader lr{lbuf, labels_path};
  const std::uint32_t lmagic = lr.u32("magic");
  if (lmagic != kLabelsMagic) {
    char hex[16];
    std::snprintf(hex, sizeof(hex), "0x%08x", lmagic);
    throw ParseError(labels_path + ": bad magic " + hex + ", expected 0x00000801", 0);
  }
  const std::uint32_t ln = lr.u32("label count");
  if (ln != n)
    throw ParseError(labels_path + ": label count " + std::to_string(ln) +
                         " does not match image count " + std::to_string(n),
                     4);
  const std::uint8_t* labels = lr.bytes(ln, "label payload");
  lr.expect_end();

  Minibatch out;
  out.inputs = DenseMatrix(n, pixels_per);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n) * pixels_per; ++i)
    out.inputs.data[i] = static_cast<double>(pixels[i]) / 255.0;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = static_cast<int>(labels[i]);
  return out;
}

void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels,
                      std::uint32_t count, std::uint32_t rows, std::uint32_t cols) {
  if (pixels.size() != static_cast<std::size_t>(count) * rows * cols)
    throw DimensionError("write_idx_images: payload size does not match count*rows*cols");
  std::vector<std::uint8_t> out;
  out.reserve(16 + pixels.size());
  be_append(out, kImagesMagic);
  be_append(out, count);
  be_append(out, rows);
  be_append(out, cols);
  out.insert(out.end(), pixels.begin(), pixels.end());
  write_file(path, out);
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  be_append(out, kLabelsMagic);
  be_append(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  write_file(path, out);
}

std::vector<std::uint8_t> quantize_unit_to_u8(const DenseMatrix& m) {
  std::vector<std::uint8_t> out(m.data.size());
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    const double v = std::clamp(m.data[i], 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

Minibatch gather(const Minibatch& source, const std::vector<std::size_t>& indices) {
  Minibatch out;
  out.inputs = DenseMatrix(indices.size(), source.inputs.cols);
  out.labels.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const std::size_t r = indices[i];
    std::copy(source.inputs.row(r), source.inputs.row(r) + source.inputs.cols,
              out.inputs.row(i));
    out.labels[i] = source.labels[r];
  }
  return out;
}

DatasetSplit make_split(const Minibatch& pool, std::size_t val_count, std::uint64_t seed) {
  const std::size_t n = pool.labels.size();
  if (val_count >= n)
    throw ConfigError("val_count " + std::to_string(val_count) +
                          " must be smaller than the pool (" + std::to_string(n) + ")",
                      "data.val_count");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);

  std::vector<std::size_t> val_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(val_count));
  std::vector<std::size_t> train_idx(idx.begin() + static_cast<std::ptrdiff_t>(val_count), idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  DatasetSplit split;
  split.train = gather(pool, train_idx);
  split.validation = gather(pool, val_idx);
  return split;
}

Minibatch synth_blobs(int n_classes, int n_per_class, int dim, double spread,
                      std::uint64_t seed) {
  if (n_classes < 1 || n_per_class < 1 || dim < 1)
    throw ConfigError("blob counts must be >= 1", "data");
  Rng rng(seed);
  Minibatch out;
  out.inputs = DenseMatrix(static_cast<std::size_t>(n_classes) * n_per_class, dim);
  out.labels.resize(out.inputs.rows);
  std::size_t row = 0;
  for (int c = 0; c < n_classes; ++c) {
    // Unit-spaced means along one-hot directions; stacked blocks alternate
    // sign so the first 2*dim classes stay a full diagonal apart.
    const int axis = c % dim;
    const int block = c / dim;
    const double sign = block % 2 == 0 ? 1.0 : -1.0;
    const double level = sign * (1.0 + static_cast<double>(block / 2));
    for (int k = 0; k < n_per_class; ++k, ++row) {
      double* x = out.inputs.row(row);
      for (int j = 0; j < dim; ++j) x[j] = spread * rng.normal();
      x[axis] += level;
      out.labels[row] = c;
    }
  }
  return out;
}

BatchStream::BatchStream(const Minibatch& source, std::size_t batch_size, std::uint64_t seed)
    : source_(&source), batch_size_(batch_size), rng_(seed) {
  if (batch_size_ < 1) throw ConfigError("batch size must be >= 1", "batch_size");
  if (source_->labels.empty()) throw ConfigError("batch stream over an empty split", "data");
  order_.resize(source_->labels.size());
  std::iota(order_.begin(), order_.end(), 0);
  reshuffle();
}

void BatchStream::reshuffle() {
  rng_.shuffle(order_);
  cursor_ = 0;
}

std::size_t BatchStream::batches_per_epoch() const {
  return (order_.size() + batch_size_ - 1) / batch_size_;
}

Minibatch BatchStream::next() {
  if (cursor_ >= order_.size()) {
    reshuffle();
    epoch_ += 1;
  }
  const std::size_t take = std::min(batch_size_, order_.size() - cursor_);
  std::vector<std::size_t> idx(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                               order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
  cursor_ += take;
  return gather(*source_, idx);
}

}  // namespace oho
