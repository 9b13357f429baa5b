#ifndef OHO_DATASET_HPP
#define OHO_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "oho/network.hpp"
#include "oho/rng.hpp"

namespace oho {

// Train / validation / test partitions. Validation is carved out of the
// training pool; test data comes from its own source.
struct DatasetSplit {
  Minibatch train;
  Minibatch validation;
  Minibatch test;
};

// Reads an IDX image/label file pair (big-endian, ubyte payload; magics
// 0x00000803 and 0x00000801). Pixels are scaled by 1/255. Throws ParseError
// with the byte offset of the first offending byte, IoError if unreadable.
Minibatch load_idx(const std::string& images_path, const std::string& labels_path);

void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels,
                      std::uint32_t count, std::uint32_t rows, std::uint32_t cols);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

// Maps unit-range values to bytes: round(clamp(v, 0, 1) * 255).
std::vector<std::uint8_t> quantize_unit_to_u8(const DenseMatrix& m);

// Seeded disjoint split of a pool into validation (val_count examples) and
// train (the rest); `test` is left empty for the caller to attach.
DatasetSplit make_split(const Minibatch& pool, std::size_t val_count, std::uint64_t seed);

// Gaussian clusters: class c is centered on a unit-spaced mean pattern with
// i.i.d. noise of standard deviation `spread`. Deterministic under seed.
Minibatch synth_blobs(int n_classes, int n_per_class, int dim, double spread, std::uint64_t seed);

// Seeded epoch permutations over one split; batches partition each epoch with
// the final ragged batch kept. Single consumer.
class BatchStream {
 public:
  BatchStream(const Minibatch& source, std::size_t batch_size, std::uint64_t seed);

  Minibatch next();
  std::size_t batches_per_epoch() const;
  std::int64_t epoch() const { return epoch_; }
  std::size_t size() const { return source_->labels.size(); }

 private:
  const Minibatch* source_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  std::int64_t epoch_ = 0;

  void reshuffle();
};

// Copies the selected rows of a split into a batch.
Minibatch gather(const Minibatch& source, const std::vector<std::size_t>& indices);

}  // namespace oho

#endif  // OHO_DATASET_HPP
