#include "claimrep/corpus_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "claimrep/csv.hpp"
#include "json.hpp"

namespace claimrep {

namespace {

using nlohmann::json;

void require_header(CsvReader& reader, const std::vector<std::string>& expected) {
  std::vector<std::string> fields;
  if (!reader.next(fields)) reader.fail("missing header row");
  if (fields != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ",";
      want += expected[i];
    }
    reader.fail("bad header, expected '" + want + "'");
  }
}

std::vector<FindingRecord> read_findings(const std::filesystem::path& path) {
  CsvReader reader(path);
  require_header(reader, {"finding_id", "drug", "gene", "direction", "paper_id"});
  std::vector<FindingRecord> findings;
  std::set<std::string> seen_ids;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 5) reader.fail("expected 5 columns, got " + std::to_string(f.size()));
    FindingRecord rec;
    rec.finding_id = normalize_token(f[0]);
    if (rec.finding_id.empty()) reader.fail("empty finding_id", 1);
    if (!seen_ids.insert(rec.finding_id).second) {
      reader.fail("duplicate finding_id '" + rec.finding_id + "'", 1);
    }
    rec.claim = make_claim_id(f[1], f[2]);
    const auto dir = parse_direction(f[3]);
    if (!dir) reader.fail("unknown direction '" + f[3] + "'", 4);
    rec.direction = *dir;
    rec.paper_id = normalize_token(f[4]);
    if (rec.paper_id.empty()) reader.fail("empty paper_id", 5);
    findings.push_back(std::move(rec));
  }
  return findings;
}

std::map<std::string, PaperRecord> read_papers(const std::filesystem::path& path,
                                               const Vocabulary* vocab,
                                               double threshold) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  std::map<std::string, PaperRecord> papers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    auto fail = [&](const std::string& what) -> void {
      throw IngestError(path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    if (!j.is_object()) fail("expected a JSON object per line");
    PaperRecord rec;
    if (!j.contains("paper_id") || !j["paper_id"].is_string()) fail("missing paper_id");
    rec.paper_id = normalize_token(j["paper_id"].get<std::string>());
    if (rec.paper_id.empty()) fail("empty paper_id");
    if (papers.count(rec.paper_id)) fail("duplicate paper_id '" + rec.paper_id + "'");
    if (!j.contains("authors") || !j["authors"].is_array()) fail("missing authors[]");
    for (const auto& a : j["authors"]) {
      if (!a.is_string()) fail("authors[] entries must be strings");
      const std::string author = normalize_token(a.get<std::string>());
      if (!author.empty()) rec.authors.insert(author);
    }
    if (rec.authors.empty()) fail("paper '" + rec.paper_id + "' has no authors");
    if (j.contains("methods")) {
      if (!j["methods"].is_array()) fail("methods must be an array");
      for (const auto& m : j["methods"]) {
        if (!m.is_string()) fail("methods[] entries must be strings");
        std::string term = normalize_token(m.get<std::string>());
        if (term.empty()) continue;
        if (vocab && !vocab->empty()) term = canonicalize_term(term, *vocab, threshold);
        rec.methods.insert(std::move(term));
      }
    }
    if (j.contains("references")) {
      if (!j["references"].is_array()) fail("references must be an array");
      for (const auto& r : j["references"]) {
        if (!r.is_string()) fail("references[] entries must be strings");
        const std::string ref = normalize_token(r.get<std::string>());
        if (!ref.empty()) rec.references.insert(ref);
      }
    }
    if (j.contains("journal_id")) {
      if (!j["journal_id"].is_string()) fail("journal_id must be a string");
      rec.journal_id = normalize_token(j["journal_id"].get<std::string>());
    }
    if (j.contains("eigenfactor") && !j["eigenfactor"].is_null()) {
      if (!j["eigenfactor"].is_number()) fail("eigenfactor must be a number");
      const double e = j["eigenfactor"].get<double>();
      if (!(e >= 0.0) || !std::isfinite(e)) fail("eigenfactor must be finite and >= 0");
      rec.eigenfactor = e;
    }
    if (j.contains("year") && !j["year"].is_null()) {
      if (!j["year"].is_number_integer()) fail("year must be an integer");
      rec.year = j["year"].get<int>();
    }
    papers.emplace(rec.paper_id, std::move(rec));
  }
  return papers;
}

std::map<ClaimId, std::vector<SignatureRecord>> read_signatures(
    const std::filesystem::path& path) {
  CsvReader reader(path);
  require_header(reader, {"drug", "gene", "cell_line", "dose", "duration", "z"});
  std::map<ClaimId, std::vector<SignatureRecord>> signatures;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != 6) reader.fail("expected 6 columns, got " + std::to_string(f.size()));
    SignatureRecord rec;
    rec.claim = make_claim_id(f[0], f[1]);
    rec.cell_line = normalize_token(f[2]);
    rec.dose = normalize_token(f[3]);
    rec.duration = normalize_token(f[4]);
    rec.z = parse_double_field(reader, f[5], "z");
    if (!std::isfinite(rec.z)) reader.fail("z must be finite", 6);
    signatures[rec.claim].push_back(std::move(rec));
  }
  return signatures;
}

void canonicalize(Corpus& corpus) {
  std::sort(corpus.findings.begin(), corpus.findings.end(),
            [](const FindingRecord& a, const FindingRecord& b) {
              return a.finding_id < b.finding_id;
            });
  for (auto& [claim, sigs] : corpus.signatures) {
    std::sort(sigs.begin(), sigs.end(),
              [](const SignatureRecord& a, const SignatureRecord& b) {
                return std::tie(a.cell_line, a.dose, a.duration, a.z) <
                       std::tie(b.cell_line, b.dose, b.duration, b.z);
              });
  }
}

Corpus assemble(std::vector<FindingRecord> findings,
                std::map<std::string, PaperRecord> papers,
                std::map<ClaimId, std::vector<SignatureRecord>> signatures,
                const std::filesystem::path& findings_path) {
  Corpus corpus;
  corpus.findings = std::move(findings);
  corpus.papers = std::move(papers);
  corpus.signatures = std::move(signatures);
  for (const auto& f : corpus.findings) {
    if (!corpus.papers.count(f.paper_id)) {
      throw IngestError(findings_path.string() + ": finding '" + f.finding_id +
                        "' references missing paper '" + f.paper_id + "'");
    }
  }
  canonicalize(corpus);
  return corpus;
}

}  // namespace

Corpus ingest_corpus(const std::filesystem::path& findings_path,
                     const std::filesystem::path& papers_path,
                     const std::filesystem::path& signatures_path) {
  return assemble(read_findings(findings_path),
                  read_papers(papers_path, nullptr, 0.0),
                  read_signatures(signatures_path), findings_path);
}

Corpus ingest_corpus(const std::filesystem::path& findings_path,
                     const std::filesystem::path& papers_path,
                     const std::filesystem::path& signatures_path,
                     const Vocabulary& vocab, double vocab_threshold) {
  if (vocab_threshold < 0.0 || vocab_threshold > 1.0) {
    throw ConfigError("vocabulary threshold must be in [0,1]");
  }
  return assemble(read_findings(findings_path),
                  read_papers(papers_path, &vocab, vocab_threshold),
                  read_signatures(signatures_path), findings_path);
}

void write_corpus(const Corpus& corpus,
                  const std::filesystem::path& findings_path,
                  const std::filesystem::path& papers_path,
                  const std::filesystem::path& signatures_path) {
  {
    std::ofstream out(findings_path);
    if (!out) throw IngestError("cannot write " + findings_path.string());
    out << "finding_id,drug,gene,direction,paper_id\n";
    for (const auto& f : corpus.findings) {
      out << csv_escape(f.finding_id) << ',' << csv_escape(f.claim.drug) << ','
          << csv_escape(f.claim.gene) << ',' << to_string(f.direction) << ','
          << csv_escape(f.paper_id) << '\n';
    }
  }
  {
    std::ofstream out(papers_path);
    if (!out) throw IngestError("cannot write " + papers_path.string());
    for (const auto& [id, p] : corpus.papers) {
      json j;
      j["paper_id"] = id;
      j["authors"] = p.authors;
      j["methods"] = p.methods;
      j["references"] = p.references;
      j["journal_id"] = p.journal_id;
      if (p.eigenfactor) j["eigenfactor"] = *p.eigenfactor;
      if (p.year) j["year"] = *p.year;
      out << j.dump() << '\n';
    }
  }
  {
    std::ofstream out(signatures_path);
    if (!out) throw IngestError("cannot write " + signatures_path.string());
    out << "drug,gene,cell_line,dose,duration,z\n";
    for (const auto& [claim, sigs] : corpus.signatures) {
      for (const auto& s : sigs) {
        out << csv_escape(claim.drug) << ',' << csv_escape(claim.gene) << ','
            << csv_escape(s.cell_line) << ',' << csv_escape(s.dose) << ','
            << csv_escape(s.duration) << ',' << format_double(s.z) << '\n';
      }
    }
  }
}

}  // namespace claimrep
