// On-disk layout of the three index files. Every integer is an 8-byte
// little-endian value except the u32 format version in the header.
//
//   header:          "BRIX" u32 version u64 generation
//   index.contexts:  header, prefix length, ontology fingerprint,
//                    vocabulary (count, then length-prefixed strings),
//                    block directory (count, then per block: key, offset, count),
//                    per block four columns: context ids, item ids, scores, positions
//   index.relations: header, count, per relation: name, forward pairs, reverse pairs
//   index.excerpts:  header, count, record offsets, records
//                    (doc index, sentence, doc id, title, text, active spans)

#include <bit>
#include <cstring>
#include <fstream>

#include "ctxsearch/error.h"
#include "ctxsearch/index.h"

namespace ctxsearch {

static_assert(std::endian::native == std::endian::little,
              "index files are written by memcpy of little-endian integers");

namespace {

constexpr char kMagic[4] = {'B', 'R', 'I', 'X'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr const char* kContextsFile = "index.contexts";
constexpr const char* kRelationsFile = "index.relations";
constexpr const char* kExcerptsFile = "index.excerpts";

class Writer {
 public:
  void header(std::uint64_t generation) {
    buf_.append(kMagic, 4);
    pod(kFormatVersion);
    u64(generation);
  }
  void u64(std::uint64_t v) { pod(v); }
  void str(std::string_view s) {
    u64(s.size());
    buf_.append(s.data(), s.size());
  }
  void column(const std::vector<std::uint64_t>& v) {
    buf_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(std::uint64_t));
  }
  std::size_t size() const { return buf_.size(); }
  void patch(std::size_t at, std::uint64_t v) { std::memcpy(buf_.data() + at, &v, sizeof v); }
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw Error("write failed for " + path.string());
  }

 private:
  template <typename T>
  void pod(T v) {
    buf_.append(reinterpret_cast<const char*>(&v), sizeof v);
  }
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : name_(path.filename().string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file " + path.string());
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::uint64_t header() {
    need(4);
    if (std::memcmp(buf_.data(), kMagic, 4) != 0) corrupt("bad magic");
    pos_ = 4;
    std::uint32_t version = 0;
    need(sizeof version);
    std::memcpy(&version, buf_.data() + pos_, sizeof version);
    pos_ += sizeof version;
    if (version != kFormatVersion) corrupt("unsupported format version " + std::to_string(version));
    return u64();
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v;
    std::memcpy(&v, buf_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }
  std::string str() {
    auto n = u64();
    need(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::vector<std::uint64_t> column(std::size_t count) {
    if (count > (buf_.size() - pos_) / 8) corrupt("column overruns file");
    std::vector<std::uint64_t> v(count);
    std::memcpy(v.data(), buf_.data() + pos_, count * 8);
    pos_ += count * 8;
    return v;
  }
  std::uint64_t count() {
    auto n = u64();
    if (n > buf_.size()) corrupt("implausible element count");
    return n;
  }
  void seek(std::uint64_t at) {
    if (at > buf_.size()) corrupt("offset beyond end of file");
    pos_ = at;
  }
  [[noreturn]] void corrupt(const std::string& what) const {
    throw Error("corrupt index file " + name_ + ": " + what);
  }

 private:
  void need(std::uint64_t n) const {
    if (n > buf_.size() - pos_) corrupt("unexpected end of file");
  }
  std::string name_;
  std::string buf_;
  std::size_t pos_ = 0;
};

void writePairs(Writer& w, const std::vector<std::pair<EntityId, EntityId>>& pairs) {
  w.u64(pairs.size());
  for (auto [a, b] : pairs) {
    w.u64(a.value);
    w.u64(b.value);
  }
}

std::vector<std::pair<EntityId, EntityId>> readPairs(Reader& r) {
  auto n = r.count();
  std::vector<std::pair<EntityId, EntityId>> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto a = r.u64();
    auto b = r.u64();
    out.emplace_back(EntityId{static_cast<std::uint32_t>(a)}, EntityId{static_cast<std::uint32_t>(b)});
  }
  return out;
}

}  // namespace

class IndexFileIo {
 public:
  static void write(const Index& index, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
      Writer w;
      w.header(index.generation_);
      w.u64(index.prefixLength_);
      w.u64(index.ontologyFingerprint_);
      w.u64(index.vocabulary_.size());
      for (const auto& word : index.vocabulary_) w.str(word);
      w.u64(index.blocks_.size());
      std::vector<std::size_t> offsetSlots;
      for (const auto& b : index.blocks_) {
        w.str(b.prefix);
        offsetSlots.push_back(w.size());
        w.u64(0);
        w.u64(b.postings.size());
      }
      for (std::size_t i = 0; i < index.blocks_.size(); ++i) {
        const auto& p = index.blocks_[i].postings;
        w.patch(offsetSlots[i], w.size());
        w.column(p.contextIds);
        w.column(p.itemIds);
        w.column(p.scores);
        w.column(p.positions);
      }
      w.save(dir / kContextsFile);
    }
    {
      Writer w;
      w.header(index.generation_);
      w.u64(index.relations_.size());
      for (const auto& r : index.relations_) {
        w.str(r.name);
        writePairs(w, r.forward);
        writePairs(w, r.reverse);
      }
      w.save(dir / kRelationsFile);
    }
    {
      Writer w;
      w.header(index.generation_);
      w.u64(index.excerpts_.size());
      std::size_t table = w.size();
      for (std::size_t i = 0; i < index.excerpts_.size(); ++i) w.u64(0);
      for (std::size_t i = 0; i < index.excerpts_.size(); ++i) {
        const auto& e = index.excerpts_[i];
        w.patch(table + 8 * i, w.size());
        w.u64(e.docIndex);
        w.u64(e.sentence);
        w.str(e.docId);
        w.str(e.title);
        w.str(e.text);
        w.u64(e.active.size());
        for (auto span : e.active) {
          w.u64(span.begin);
          w.u64(span.end);
        }
      }
      w.save(dir / kExcerptsFile);
    }
  }

  static Index read(const std::filesystem::path& dir) {
    Index index;
    Reader contexts(dir / kContextsFile);
    index.generation_ = contexts.header();
    index.prefixLength_ = contexts.u64();
    index.ontologyFingerprint_ = contexts.u64();
    auto nWords = contexts.count();
    index.vocabulary_.reserve(nWords);
    for (std::uint64_t i = 0; i < nWords; ++i) index.vocabulary_.push_back(contexts.str());
    auto nBlocks = contexts.count();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> directory;
    for (std::uint64_t i = 0; i < nBlocks; ++i) {
      PrefixBlock b;
      b.prefix = contexts.str();
      auto offset = contexts.u64();
      auto count = contexts.u64();
      directory.emplace_back(offset, count);
      index.blocks_.push_back(std::move(b));
    }
    for (std::uint64_t i = 0; i < nBlocks; ++i) {
      auto [offset, count] = directory[i];
      contexts.seek(offset);
      auto& p = index.blocks_[i].postings;
      p.contextIds = contexts.column(count);
      p.itemIds = contexts.column(count);
      p.scores = contexts.column(count);
      p.positions = contexts.column(count);
      p.witness.assign(count, 0);
    }

    Reader relations(dir / kRelationsFile);
    if (relations.header() != index.generation_) {
      relations.corrupt("generation stamp differs from index.contexts");
    }
    auto nRel = relations.count();
    for (std::uint64_t i = 0; i < nRel; ++i) {
      RelationLists r;
      r.name = relations.str();
      r.forward = readPairs(relations);
      r.reverse = readPairs(relations);
      index.relations_.push_back(std::move(r));
    }

    Reader excerpts(dir / kExcerptsFile);
    if (excerpts.header() != index.generation_) {
      excerpts.corrupt("generation stamp differs from index.contexts");
    }
    auto nExcerpts = excerpts.count();
    std::vector<std::uint64_t> offsets(nExcerpts);
    for (auto& o : offsets) o = excerpts.u64();
    index.excerpts_.reserve(nExcerpts);
    for (std::uint64_t i = 0; i < nExcerpts; ++i) {
      excerpts.seek(offsets[i]);
      Excerpt e;
      e.contextId = i;
      e.docIndex = excerpts.u64();
      e.sentence = excerpts.u64();
      e.docId = excerpts.str();
      e.title = excerpts.str();
      e.text = excerpts.str();
      auto nSpans = excerpts.count();
      for (std::uint64_t s = 0; s < nSpans; ++s) {
        auto b = excerpts.u64();
        auto en = excerpts.u64();
        if (b > en || en > e.text.size()) excerpts.corrupt("excerpt span out of range");
        e.active.push_back({static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(en)});
      }
      index.excerpts_.push_back(std::move(e));
    }
    return index;
  }
};

void Index::write(const std::filesystem::path& directory) const {
  IndexFileIo::write(*this, directory);
}

Index Index::read(const std::filesystem::path& directory) { return IndexFileIo::read(directory); }

}  // namespace ctxsearch
