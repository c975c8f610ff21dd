#pragma once

#include <filesystem>

#include "claimrep/types.hpp"
#include "claimrep/vocabulary.hpp"

namespace claimrep {

// Reads findings.csv, papers.jsonl and signatures.csv into a validated
// Corpus. Referential integrity is enforced: every finding's paper must
// exist. Claims present in findings but absent from signatures are retained
// (they carry no experimental evidence). Throws IngestError with file/line
// context on malformed rows, duplicate finding ids, unknown direction tokens
// and dangling paper references.
Corpus ingest_corpus(const std::filesystem::path& findings_path,
                     const std::filesystem::path& papers_path,
                     const std::filesystem::path& signatures_path);

// Same, but maps each paper's raw method strings through the vocabulary
// (exact/synonym first, fuzzy at >= threshold; unmatched terms are kept
// as normalized raw strings).
Corpus ingest_corpus(const std::filesystem::path& findings_path,
                     const std::filesystem::path& papers_path,
                     const std::filesystem::path& signatures_path,
                     const Vocabulary& vocab, double vocab_threshold);

// Writes the corpus back in the ingestion formats. Row order is canonical,
// so write + re-ingest round-trips to an equal Corpus.
void write_corpus(const Corpus& corpus,
                  const std::filesystem::path& findings_path,
                  const std::filesystem::path& papers_path,
                  const std::filesystem::path& signatures_path);

}  // namespace claimrep
