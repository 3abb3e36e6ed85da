// SPDX-License-Identifier: Apache-2.0
#include "dqa/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "dqa/error.hpp"
#include "dqa/random.hpp"
#include "dqa/text.hpp"

namespace dqa::synthetic {
namespace {

using taxonomy::L1;
using taxonomy::L2;
using taxonomy::L3;
using taxonomy::LabeledQuestion;
using taxonomy::TaxonomyLabel;

constexpr std::array<const char*, 10> kFunctionWords = {
    "the", "of", "and", "to", "in", "for", "with", "on", "by", "a"};

// Pseudo-word generator: two or three consonant-vowel syllables.
std::string pseudo_word(Rng& rng) {
  static constexpr std::string_view consonants = "bdfgklmnprstvz";
  static constexpr std::string_view vowels = "aeiou";
  const std::size_t syllables = 2 + rng.index(2);
  std::string w;
  for (std::size_t i = 0; i < syllables; ++i) {
    w += consonants[rng.index(consonants.size())];
    w += vowels[rng.index(vowels.size())];
  }
  return w;
}

std::vector<std::string> make_vocabulary(std::size_t n, Rng& rng) {
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < n) {
    std::string w = pseudo_word(rng);
    if (text::is_stopword(w) || !seen.insert(w).second) continue;
    words.push_back(std::move(w));
  }
  return words;
}

std::string make_sentence(const std::vector<std::string>& content, Rng& rng,
                          std::vector<std::string>& used) {
  const std::size_t n = 6 + rng.index(5);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& w = content[rng.index(content.size())];
    used.push_back(w);
    if (!s.empty()) s += ' ';
    s += w;
    if (i + 1 < n && rng.bernoulli(0.3)) {
      s += ' ';
      s += kFunctionWords[rng.index(kFunctionWords.size())];
    }
  }
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  s += '.';
  return s;
}

std::string question_id(std::size_t doc, std::size_t q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%04zu-%03zu", doc, q);
  return buf;
}

std::string worker_id(std::size_t w) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%02zu", w + 1);
  return buf;
}

corpus::AnswerSpan sentence_span(const corpus::Document& doc, std::size_t s) {
  const auto& sent = doc.sentences.at(s);
  return corpus::make_span(doc, sent.char_start, sent.char_end);
}

// A suffix of the sentence starting at a word boundary past its first third.
corpus::AnswerSpan partial_span(const corpus::Document& doc, std::size_t s) {
  const auto& sent = doc.sentences.at(s);
  const std::size_t from = sent.text.find(' ', sent.text.size() / 3);
  if (from == std::string::npos) return sentence_span(doc, s);
  return corpus::make_span(doc, sent.char_start + from + 1, sent.char_end);
}

aggregate::AnnotationRecord simulate_worker(const PlantedQuestion& q,
                                            const corpus::Document& doc,
                                            const std::string& worker,
                                            double accuracy, Placement placement,
                                            Rng& rng) {
  aggregate::AnnotationRecord r;
  r.question_id = q.question_id;
  r.doc_id = q.doc_id;
  r.question = q.text;
  r.worker_id = worker;
  r.invalid = rng.bernoulli(q.invalid ? 0.9 : 0.005);
  if (r.invalid) return r;

  r.is_yes_no = rng.bernoulli(accuracy) ? q.is_yes_no : !q.is_yes_no;
  const bool says_answer = rng.bernoulli(accuracy) ? q.answerable : !q.answerable;
  if (r.is_yes_no) {
    r.yes_no_answer = says_answer ? aggregate::YesNo::Yes : aggregate::YesNo::No;
    r.no_evidence = !says_answer;
  } else {
    r.has_answer = says_answer;
  }
  if (!says_answer) return r;

  // First-sentence placement keeps every selected span inside sentence 0.
  const bool first_only = placement == Placement::FirstSentence;
  const std::size_t n = doc.sentences.size();
  if (!q.answerable) {
    r.spans.push_back(sentence_span(doc, first_only ? 0 : rng.index(n)));
    return r;
  }
  r.spans.push_back(rng.bernoulli(0.25) ? partial_span(doc, q.gold_sentence)
                                        : sentence_span(doc, q.gold_sentence));
  if (!first_only && n > 1 && rng.bernoulli(0.45)) {
    const std::size_t other =
        q.gold_sentence + 1 < n ? q.gold_sentence + 1 : q.gold_sentence - 1;
    r.spans.push_back(sentence_span(doc, other));
  }
  return r;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (n_docs == 0 || sentences_per_doc == 0 || questions_per_doc == 0 ||
      workers_per_question == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic counts must be positive");
  }
  if (vocab_size < 50) {
    throw Error(ErrorCode::InvalidArgument, "synthetic vocabulary needs at least 50 words");
  }
  if (worker_pool < workers_per_question) {
    throw Error(ErrorCode::InvalidArgument, "worker pool smaller than workers per question");
  }
  if (!fraction_ok(unanswerable_fraction) || !fraction_ok(yes_no_fraction) ||
      !fraction_ok(invalid_fraction) || !fraction_ok(worker_accuracy)) {
    throw Error(ErrorCode::InvalidArgument, "synthetic fractions must lie in [0, 1]");
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng vocab_rng(derive_seed(spec.seed, 0));
  const auto vocabulary = make_vocabulary(spec.vocab_size, vocab_rng);
  // The tail of the vocabulary never appears in a document.
  const std::size_t absent_n = std::max<std::size_t>(20, spec.vocab_size / 10);
  const std::vector<std::string> content(vocabulary.begin(), vocabulary.end() - absent_n);
  const std::vector<std::string> absent(vocabulary.end() - absent_n, vocabulary.end());

  std::vector<std::string> workers;
  for (std::size_t w = 0; w < spec.worker_pool; ++w) workers.push_back(worker_id(w));

  SyntheticCorpus out;
  for (std::size_t d = 0; d < spec.n_docs; ++d) {
    Rng rng(derive_seed(spec.seed, 1 + d));
    std::vector<std::vector<std::string>> sentence_words(spec.sentences_per_doc);
    std::string body;
    for (std::size_t s = 0; s < spec.sentences_per_doc; ++s) {
      if (s > 0) body += (s % 5 == 0) ? "\n\n" : " ";
      body += make_sentence(content, rng, sentence_words[s]);
    }
    char title[48];
    std::snprintf(title, sizeof title, "Synthetic document %zu", d + 1);
    corpus::Document doc = corpus::ingest(body, title);
    if (doc.sentences.size() != spec.sentences_per_doc) {
      throw std::logic_error("synthetic document segmented into the wrong sentence count");
    }

    std::map<std::string, std::size_t> doc_counts;
    for (const auto& words : sentence_words) {
      for (const auto& w : words) ++doc_counts[w];
    }

    for (std::size_t qi = 0; qi < spec.questions_per_doc; ++qi) {
      Rng qrng(derive_seed(spec.seed, (d + 1) * 1'000'003ULL + qi));
      PlantedQuestion q;
      q.question_id = question_id(d, qi);
      q.doc_id = doc.id;
      q.answerable = !qrng.bernoulli(spec.unanswerable_fraction);
      q.is_yes_no = qrng.bernoulli(spec.yes_no_fraction);
      q.invalid = qrng.bernoulli(spec.invalid_fraction);

      std::vector<std::string> keywords;
      if (q.answerable) {
        q.gold_sentence = spec.placement == Placement::FirstSentence
                              ? 0
                              : qrng.index(spec.sentences_per_doc);
        q.gold_span = sentence_span(doc, q.gold_sentence);
        const auto& words = sentence_words[q.gold_sentence];
        std::map<std::string, std::size_t> local;
        for (const auto& w : words) ++local[w];
        std::vector<std::string> distinctive;
        std::vector<std::string> others;
        for (const auto& [w, c] : local) {
          (doc_counts[w] == c ? distinctive : others).push_back(w);
        }
        qrng.shuffle(std::span(distinctive));
        qrng.shuffle(std::span(others));
        distinctive.insert(distinctive.end(), others.begin(), others.end());
        keywords.assign(distinctive.begin(),
                        distinctive.begin() + std::min<std::size_t>(3, distinctive.size()));
      } else {
        for (int k = 0; k < 3; ++k) keywords.push_back(absent[qrng.index(absent.size())]);
      }

      if (q.is_yes_no) {
        q.text = "Does the document mention " + join_words(keywords) + "?";
        q.label = {L1::Document, L2::YesNo, L3::Factual};
      } else if (qrng.bernoulli(0.5)) {
        q.text = "What does the document say about " + join_words(keywords) + "?";
        q.label = {L1::Document, L2::Factual, std::nullopt};
      } else {
        std::string rest;
        for (std::size_t k = 1; k < keywords.size(); ++k) rest += " " + keywords[k];
        q.text = "What is the " + keywords[0] + " of the" + rest + "?";
        q.label = {L1::Factoid, std::nullopt, std::nullopt};
      }

      std::vector<std::size_t> pool(workers.size());
      for (std::size_t w = 0; w < pool.size(); ++w) pool[w] = w;
      qrng.shuffle(std::span(pool));
      for (std::size_t w = 0; w < spec.workers_per_question; ++w) {
        out.annotations.push_back(
            simulate_worker(q, doc, workers[pool[w]], spec.worker_accuracy, spec.placement, qrng));
      }
      out.labeled.push_back({q.text, q.label});
      out.questions.push_back(std::move(q));
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

namespace {

struct TemplateClass {
  TaxonomyLabel label;
  std::vector<const char*> templates;
};

const std::vector<TemplateClass>& template_classes() {
  static const std::vector<TemplateClass> classes = {
      // Yes/no questions about the document, one entry per L3 intent.
      {{L1::Document, L2::YesNo, L3::Factual},
       {"Does the document state who {v} {t}?", "Does the document mention {t}?",
        "Does the document say when {t} starts?", "Is {t} mentioned in the document?",
        "Does the document name the person responsible for {t}?"}},
      {{L1::Document, L2::YesNo, L3::Navigational},
       {"Is there a section about {t} in the document?",
        "Does the document have a chapter on {t}?",
        "Does the document contain a part covering {t}?"}},
      {{L1::Document, L2::YesNo, L3::Overview},
       {"Is the document mainly about {t}?", "Is the overall aim of the document {t}?",
        "Is the document primarily focused on {t}?"}},
      {{L1::Document, L2::YesNo, L3::Summary},
       {"Does the document summarize {t}?", "Does the document give a summary of {t}?",
        "Can the document be summed up as a review of {t}?"}},
      {{L1::Document, L2::YesNo, L3::CopyEditing},
       {"Does the wording about {t} in the document need fixing?",
        "Should the paragraph on {t} in the document be rephrased?",
        "Does the document have typos in the {t} part?"}},
      {{L1::Document, L2::YesNo, L3::Elaboration},
       {"Does the document explain in detail why {t} matters?",
        "Does the document justify the reasoning behind {t}?",
        "Does the document elaborate on how {t} works?"}},
      // Open document-centered questions.
      {{L1::Document, L2::Factual, std::nullopt},
       {"What does the document say about {t}?",
        "Who handles {t} according to the document?",
        "Where in the document is the cost of {t} given?",
        "When does the document say {t} is due?",
        "Which team does the document assign to {t}?"}},
      {{L1::Document, L2::Navigational, std::nullopt},
       {"Go to {t} in the document.", "Take me to the part of the document about {t}.",
        "Jump to the {t} part of the document.", "Navigate the document to {t}."}},
      {{L1::Document, L2::Overview, std::nullopt},
       {"What is the overall focus of the document?",
        "What is the main aim of this document regarding {t}?",
        "What is the document mostly about?", "Give me the big picture of the document."}},
      {{L1::Document, L2::Summary, std::nullopt},
       {"Find and summarize {t} in the document.",
        "Summarize what the document says about {t}.",
        "Give me a summary of the {t} part of the document.",
        "Sum up the document's take on {t}."}},
      {{L1::Document, L2::CopyEditing, std::nullopt},
       {"Highlight text related to {t} in the document.",
        "Rephrase the sentence about {t} in the document.",
        "Fix the wording of the {t} paragraph in the document.",
        "Correct the grammar of the document's {t} sentence."}},
      {{L1::Document, L2::Elaboration, std::nullopt},
       {"Please detail the process to {a} described in the document.",
        "Explain in detail how the document justifies {t}.",
        "Describe step by step how {t} works according to the document.",
        "Elaborate on the reasons the document gives for {t}."}},
      // Questions for other kinds of responders.
      {{L1::Factoid, std::nullopt, std::nullopt},
       {"What is the date of the {e}?", "Who is the CEO of {o}?", "When was {o} founded?",
        "How many people attended the {e}?", "What is the capital of {c}?",
        "Where is the headquarters of {o}?", "What year did the {e} start?"}},
      {{L1::Mechanical, std::nullopt, std::nullopt},
       {"Highlight ``{p}''", "Find '{p}'", "Go to section {n}.", "Read section {n}.",
        "Bring me to section {n}.", "Search for \"{p}\".", "Scroll to page {n}.",
        "Underline '{p}'"}},
      {{L1::Other, std::nullopt, std::nullopt},
       {"Read the email to me.", "Send this to {person}.", "Set a reminder for {time}.",
        "Play some music.", "What is the weather like {time}?", "Call {person}.",
        "Remind me to review this {time}.", "Schedule a meeting with {person} {time}."}},
  };
  return classes;
}

const std::map<std::string, std::vector<const char*>>& fillers() {
  static const std::map<std::string, std::vector<const char*>> f = {
      {"t", {"the budget", "coaching principles", "grant funds", "the pilot program",
             "safety training", "the hiring process", "data retention", "travel expenses",
             "the project timeline", "quality control", "customer feedback",
             "the risk assessment", "staff onboarding", "performance reviews",
             "the marketing plan", "remote work", "the annual report", "energy savings",
             "the vendor contract", "community outreach"}},
      {"v", {"is teaching", "manages", "approves", "funds", "coordinates", "leads"}},
      {"a", {"apply for a grant", "request leave", "submit an invoice",
             "book a meeting room", "report an incident", "renew a contract"}},
      {"e", {"festival", "conference", "marathon", "election", "summit", "exhibition"}},
      {"o", {"Acme Corp", "the city council", "Globex", "the national library",
             "Initech", "the regional hospital"}},
      {"c", {"France", "Kenya", "Peru", "Norway", "Vietnam", "Canada"}},
      {"p", {"Capability workers", "budget", "next steps", "deadline", "risk register",
             "key findings", "action items", "contact details"}},
      {"n", {"1", "2", "3", "4", "5", "7", "12"}},
      {"person", {"my manager", "Alex", "the team", "Jordan", "my assistant"}},
      {"time", {"tomorrow", "today", "next week", "at noon", "on Friday"}},
  };
  return f;
}

std::string fill(std::string_view tmpl, Rng& rng) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      const std::string key(tmpl.substr(i + 1, close - i - 1));
      const auto& choices = fillers().at(key);
      out += choices[rng.index(choices.size())];
      i = close;
    } else {
      out += tmpl[i];
    }
  }
  return out;
}

std::size_t count_for(const TaxonomyLabel& label, std::size_t per_class) {
  if (label.l2 == L2::YesNo) return std::max<std::size_t>(1, per_class / 2);
  if (label.l1 != L1::Document) return 2 * per_class;
  return per_class;
}

TaxonomyLabel random_label_at(taxonomy::Level level, const TaxonomyLabel& old, Rng& rng) {
  TaxonomyLabel l = old;
  auto random_l3 = [&] { return static_cast<L3>(rng.index(6)); };
  auto random_l2 = [&] {
    const auto v = static_cast<L2>(rng.index(7));
    return v;
  };
  switch (level) {
    case taxonomy::Level::L1:
      l.l1 = static_cast<L1>(rng.index(4));
      if (l.l1 != L1::Document) {
        l.l2.reset();
        l.l3.reset();
      } else if (l.l1 != old.l1) {
        l.l2 = random_l2();
        l.l3 = l.l2 == L2::YesNo ? std::optional<L3>(random_l3()) : std::nullopt;
      }
      break;
    case taxonomy::Level::L2:
      l.l2 = random_l2();
      if (l.l2 != L2::YesNo) {
        l.l3.reset();
      } else if (old.l2 != L2::YesNo) {
        l.l3 = random_l3();
      }
      break;
    case taxonomy::Level::L3:
      l.l3 = random_l3();
      break;
  }
  return l;
}

}  // namespace

std::vector<LabeledQuestion> template_questions(const TemplateSpec& spec) {
  if (spec.per_class == 0) {
    throw Error(ErrorCode::InvalidArgument, "per_class must be positive");
  }
  Rng rng(spec.seed);
  std::vector<LabeledQuestion> out;
  for (const auto& cls : template_classes()) {
    const std::size_t n = count_for(cls.label, spec.per_class);
    for (std::size_t i = 0; i < n; ++i) {
      const char* tmpl = cls.templates[rng.index(cls.templates.size())];
      out.push_back({fill(tmpl, rng), cls.label});
    }
  }
  return out;
}

std::vector<LabeledQuestion> with_label_noise(const std::vector<LabeledQuestion>& data,
                                              taxonomy::Level level, double rate,
                                              std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "noise rate must lie in [0, 1]");
  }
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (taxonomy::class_of(data[i].label, level)) eligible.push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(std::span(eligible));
  const auto n = static_cast<std::size_t>(std::llround(rate * static_cast<double>(eligible.size())));
  std::vector<LabeledQuestion> out = data;
  for (std::size_t k = 0; k < n; ++k) {
    auto& q = out[eligible[k]];
    q.label = random_label_at(level, q.label, rng);
  }
  return out;
}

std::vector<LabeledQuestion> random_label_questions(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledQuestion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> words;
    const std::size_t len = 3 + rng.index(5);
    for (std::size_t k = 0; k < len; ++k) words.push_back(pseudo_word(rng));
    TaxonomyLabel label;
    label.l1 = static_cast<L1>(rng.index(4));
    if (label.l1 == L1::Document) label.l2 = L2::Factual;
    out.push_back({join_words(words), label});
  }
  return out;
}

taxonomy::TaxonomyModel default_model() {
  return taxonomy::train_model(template_questions());
}

}  // namespace dqa::synthetic
