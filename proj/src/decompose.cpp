#include "ctxsearch/decompose.h"

#include <algorithm>
#include <optional>
#include <set>

#include "ctxsearch/error.h"
#include "ctxsearch/parse_tree.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

struct SentenceView {
  std::string text;
  std::vector<CharSpan> offsets;
  std::vector<std::string> tokens;
  // Index into the annotation list per token, -1 if none.
  std::vector<int> annotationAt;
  std::uint32_t base = 0;  // offset of `text` within the assembled text
};

struct TokenRef {
  std::size_t view;
  std::size_t token;
  bool operator<(const TokenRef& o) const {
    return view != o.view ? view < o.view : token < o.token;
  }
};

SentenceView makeView(const Sentence& s, const std::vector<TokenAnnotation>& annotations,
                      std::size_t sentenceIndex) {
  SentenceView v;
  v.tokens = s.tokens;
  v.text = s.text;
  v.offsets = locateTokens(v.text, v.tokens);
  if (v.offsets.size() != v.tokens.size()) {
    v.text.clear();
    for (std::size_t i = 0; i < v.tokens.size(); ++i) {
      if (i) v.text += ' ';
      v.text += v.tokens[i];
    }
    v.offsets = locateTokens(v.text, v.tokens);
  }
  v.annotationAt.assign(v.tokens.size(), -1);
  for (std::size_t a = 0; a < annotations.size(); ++a) {
    const auto& ann = annotations[a];
    if (ann.sentence != sentenceIndex) continue;
    for (auto t = ann.firstToken; t <= ann.lastToken && t < v.tokens.size(); ++t) {
      v.annotationAt[t] = static_cast<int>(a);
    }
  }
  return v;
}

Context assemble(const std::vector<TokenRef>& seq, const std::vector<SentenceView>& views,
                 const std::vector<TokenAnnotation>& annotations, std::string text) {
  Context ctx;
  ctx.text = std::move(text);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& v = views[seq[k].view];
    std::size_t t = seq[k].token;
    auto position = static_cast<std::uint32_t>(k + 1);
    int ann = v.annotationAt[t];
    if (ann >= 0) {
      bool continuation = k > 0 && seq[k - 1].view == seq[k].view && t > 0 &&
                          seq[k - 1].token == t - 1 && v.annotationAt[t - 1] == ann;
      if (!continuation) ctx.items.push_back({position, annotations[ann].entity});
    } else if (!text::isPunctuation(v.tokens[t])) {
      ctx.items.push_back({position, text::normalizeWord(v.tokens[t])});
    }
  }
  std::set<TokenRef> used(seq.begin(), seq.end());
  std::optional<TokenRef> runStart, runEnd;
  auto flush = [&] {
    if (!runStart) return;
    const auto& v = views[runStart->view];
    ctx.active.push_back({v.base + v.offsets[runStart->token].begin,
                          v.base + v.offsets[runEnd->token].end});
  };
  for (const auto& r : used) {
    if (runEnd && runEnd->view == r.view && runEnd->token + 1 == r.token) {
      runEnd = r;
      continue;
    }
    flush();
    runStart = r;
    runEnd = r;
  }
  flush();
  return ctx;
}

}  // namespace

DecompositionMode parseMode(std::string_view name) {
  if (name == "contexts") return DecompositionMode::Contexts;
  if (name == "sentences") return DecompositionMode::Sentences;
  if (name == "sections") return DecompositionMode::Sections;
  throw Error("unknown decomposition mode '" + std::string(name) + "'");
}

std::string_view modeName(DecompositionMode mode) {
  switch (mode) {
    case DecompositionMode::Contexts: return "contexts";
    case DecompositionMode::Sentences: return "sentences";
    case DecompositionMode::Sections: return "sections";
  }
  return "?";
}

std::vector<CharSpan> locateTokens(std::string_view text, const std::vector<std::string>& tokens) {
  std::vector<CharSpan> out;
  std::size_t cursor = 0;
  for (const auto& t : tokens) {
    auto pos = text.find(t, cursor);
    if (t.empty() || pos == std::string_view::npos) return {};
    out.push_back({static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos + t.size())});
    cursor = pos + t.size();
  }
  return out;
}

std::vector<Context> decompose(const Document& document, const Ontology& ontology,
                               DecompositionMode mode, const DecomposeOptions& options) {
  auto annotations = resolveAnaphora(document, recognizeEntities(document, ontology), ontology);

  std::vector<Context> out;
  auto emit = [&](Context ctx, std::size_t sentence) {
    if (ctx.items.empty()) return;
    ctx.id = out.size();
    ctx.docId = document.id;
    ctx.title = document.title;
    ctx.sentence = sentence;
    out.push_back(std::move(ctx));
  };

  std::size_t sentenceIndex = 0;
  for (const auto& section : document.sections) {
    std::vector<SentenceView> views;
    std::string sectionText;
    std::size_t sectionFirst = sentenceIndex;
    for (const auto& sentence : section.sentences) {
      auto view = makeView(sentence, annotations, sentenceIndex);
      if (mode == DecompositionMode::Sections) {
        if (!sectionText.empty()) sectionText += ' ';
        view.base = static_cast<std::uint32_t>(sectionText.size());
        sectionText += view.text;
        views.push_back(std::move(view));
        ++sentenceIndex;
        continue;
      }

      std::vector<std::vector<std::size_t>> sequences;
      if (mode == DecompositionMode::Contexts && sentence.parse) {
        try {
          ParseNode parse = parseBracketed(*sentence.parse);
          if (parse.leaves() == sentence.tokens) {
            sequences = recombine(buildSciTree(parse, options.rules));
          }
        } catch (const SyntaxError&) {
          // Treated like an unparsed sentence.
        }
      }
      if (sequences.empty()) {
        std::vector<std::size_t> all(sentence.tokens.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        sequences.push_back(std::move(all));
      }
      std::vector<SentenceView> single{std::move(view)};
      for (const auto& seq : sequences) {
        std::vector<TokenRef> refs;
        refs.reserve(seq.size());
        for (auto t : seq) refs.push_back({0, t});
        emit(assemble(refs, single, annotations, single.front().text), sentenceIndex);
      }
      ++sentenceIndex;
    }
    if (mode == DecompositionMode::Sections && !views.empty()) {
      std::vector<TokenRef> refs;
      for (std::size_t v = 0; v < views.size(); ++v) {
        for (std::size_t t = 0; t < views[v].tokens.size(); ++t) refs.push_back({v, t});
      }
      emit(assemble(refs, views, annotations, sectionText), sectionFirst);
    }
  }
  return out;
}

std::vector<Context> decomposeCorpus(const Corpus& corpus, const Ontology& ontology,
                                     DecompositionMode mode, const DecomposeOptions& options) {
  std::vector<Context> out;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    for (auto& ctx : decompose(corpus.documents[d], ontology, mode, options)) {
      ctx.id = out.size();
      ctx.docIndex = d;
      out.push_back(std::move(ctx));
    }
  }
  return out;
}

Context makeContext(std::uint64_t id, const std::vector<std::string>& tokens,
                    const std::vector<std::pair<std::pair<std::size_t, std::size_t>, EntityId>>&
                        entities) {
  Sentence s;
  s.tokens = tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) s.text += ' ';
    s.text += tokens[i];
  }
  std::vector<TokenAnnotation> annotations;
  for (const auto& [span, e] : entities) {
    annotations.push_back({0, span.first, span.second, e, Provenance::Link});
  }
  std::vector<SentenceView> views{makeView(s, annotations, 0)};
  std::vector<TokenRef> refs;
  for (std::size_t t = 0; t < tokens.size(); ++t) refs.push_back({0, t});
  Context ctx = assemble(refs, views, annotations, views.front().text);
  ctx.id = id;
  return ctx;
}

}  // namespace ctxsearch
