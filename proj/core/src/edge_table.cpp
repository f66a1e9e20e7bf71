#include "shapegram/edge_table.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "parallel.hpp"

namespace shapegram {

EdgeScoreTable::EdgeScoreTable(std::shared_ptr<const EdgeIndex> index, std::vector<double> values)
    : index_(std::move(index)), values_(std::move(values)) {
  if (static_cast<long long>(values_.size()) != index_->slot_count())
    throw std::invalid_argument("edge table: value array does not match the edge index");
}

double EdgeScoreTable::value(int a_idx, int b_idx) const {
  const Grid& grid = index_->grid();
  const int disp = index_->displacement_index(grid.col(b_idx) - grid.col(a_idx),
                                              grid.row(b_idx) - grid.row(a_idx));
  if (disp < 0) throw std::out_of_range("edge table: pair is not admissible");
  return value_at(a_idx, disp);
}

std::size_t EdgeScoreTable::pair_count() const {
  const Grid& grid = index_->grid();
  std::size_t count = 0;
  for (int a = 0; a < grid.point_count(); ++a)
    for (int d = 0; d < index_->displacement_count(); ++d)
      if (index_->endpoint_in_grid(a, d) && index_->point_delta(d) > 0) ++count;
  return count;
}

EdgeScoreTable precompute_edge_table(std::shared_ptr<const EdgeIndex> index,
                                     const GridToImageMap& map, const GradientField& grad,
                                     const LikelihoodConfig& cfg) {
  const EdgeIndex& idx = *index;
  const Grid& grid = idx.grid();
  const int K = idx.displacement_count();
  std::vector<double> values(static_cast<std::size_t>(idx.slot_count()), 0.0);

  detail::parallel_chunks(grid.point_count(), 64, [&](long long, long long begin, long long end) {
    for (long long a = begin; a < end; ++a) {
      const Point pa = map.to_pixel(grid.point(static_cast<int>(a)));
      for (int d = 0; d < K; ++d) {
        if (!idx.endpoint_in_grid(static_cast<int>(a), d)) continue;
        if (idx.point_delta(d) < 0) continue;  // canonical direction only
        const int b = static_cast<int>(a) + idx.point_delta(d);
        const Point pb = map.to_pixel(grid.point(b));
        values[static_cast<std::size_t>(idx.slot(static_cast<int>(a), d))] =
            edge_integral(pa, pb, grad, cfg);
      }
    }
  });
  return EdgeScoreTable(std::move(index), std::move(values));
}

double triangle_log_likelihood(int type, Point x0, Point x1, Point x2,
                               const EdgeScoreTable& table, const LikelihoodConfig& cfg) {
  return triangle_log_likelihood(Triangle{type, x0, x1, x2}, table, cfg);
}

double triangle_log_likelihood(const Triangle& t, const EdgeScoreTable& table,
                               const LikelihoodConfig& cfg) {
  if (t.type == 2) return 0.0;
  const Grid& grid = table.index().grid();
  double total = 0.0;
  for (const auto& [p, q] : boundary_edges(t)) {
    const int a = grid.index(static_cast<int>(p.x), static_cast<int>(p.y));
    const int b = grid.index(static_cast<int>(q.x), static_cast<int>(q.y));
    total += table.value(a, b);
  }
  return cfg.lambda * total;
}

namespace {

constexpr char kMagic[4] = {'S', 'G', 'T', 'B'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_le(std::ofstream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
bool read_le(std::ifstream& in, T& value) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) return false;
  std::memcpy(&value, bytes, sizeof(T));
  return true;
}

}  // namespace

void save_edge_table(const EdgeScoreTable& table, const std::string& path,
                     std::uint64_t image_hash, std::uint64_t config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write edge table cache: " + path);
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint64_t>(out, image_hash);
  write_le<std::uint64_t>(out, config_hash);
  const EdgeIndex& idx = table.index();
  write_le<std::int32_t>(out, idx.grid().width);
  write_le<std::int32_t>(out, idx.grid().height);
  write_le<std::int32_t>(out, idx.max_edge_len());
  const std::uint64_t count = static_cast<std::uint64_t>(idx.slot_count());
  write_le<std::uint64_t>(out, count);
  for (int a = 0; a < idx.grid().point_count(); ++a)
    for (int d = 0; d < idx.displacement_count(); ++d)
      write_le<double>(out, idx.endpoint_in_grid(a, d) ? table.value_at(a, d) : 0.0);
}

std::optional<EdgeScoreTable> load_edge_table(const std::string& path,
                                              std::shared_ptr<const EdgeIndex> index,
                                              std::uint64_t image_hash,
                                              std::uint64_t config_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) return std::nullopt;
  std::uint32_t version;
  std::uint64_t file_image_hash, file_config_hash, count;
  std::int32_t w, h, lmax;
  if (!read_le(in, version) || version != kVersion) return std::nullopt;
  if (!read_le(in, file_image_hash) || file_image_hash != image_hash) return std::nullopt;
  if (!read_le(in, file_config_hash) || file_config_hash != config_hash) return std::nullopt;
  if (!read_le(in, w) || !read_le(in, h) || !read_le(in, lmax)) return std::nullopt;
  if (w != index->grid().width || h != index->grid().height || lmax != index->max_edge_len())
    return std::nullopt;
  if (!read_le(in, count) || count != static_cast<std::uint64_t>(index->slot_count()))
    return std::nullopt;

  std::vector<double> values(count);
  for (auto& v : values)
    if (!read_le(in, v)) return std::nullopt;
  return EdgeScoreTable(std::move(index), std::move(values));
}

}  // namespace shapegram
