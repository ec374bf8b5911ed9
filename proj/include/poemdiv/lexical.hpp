#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "poemdiv/corpus.hpp"

namespace poemdiv {

struct LexicalConfig {
  std::size_t mattr_window = 500;
  double mtld_ttr_threshold = 0.72;
  bool lowercase = true;
};

/// Distinct tokens / total tokens. Empty input is an error.
double ttr(std::span<const std::string> tokens);

struct AttrResult {
  double value = 0.0;
  std::size_t excluded = 0;  // quatrains empty after normalization
};

/// Unweighted mean of per-quatrain TTRs; empty quatrains are excluded and
/// counted. All-empty samples are an error.
AttrResult attr(const Corpus& sample, bool lowercase = true);

/// Mean TTR over all contiguous windows of exactly `window` tokens; streams
/// shorter than the window fall back to plain TTR.
double mattr(std::span<const std::string> tokens, std::size_t window);

/// Bidirectional MTLD: factor counting forward and over the reversed stream,
/// partial factors weighted (1 - TTR)/(1 - threshold), value = N / factors
/// per direction (N when a direction completes no factors), mean of both.
double mtld(std::span<const std::string> tokens, double ttr_threshold = 0.72);

/// One direction of the factor count; exposed for the report provenance and
/// symmetric-stream checks.
double mtld_forward(std::span<const std::string> tokens, double ttr_threshold = 0.72);

struct LexicalReport {
  double attr = 0.0;
  double mattr = 0.0;
  double mtld = 0.0;
  std::size_t excluded_quatrains = 0;
};

/// Full battery on a sample; MATTR and MTLD run on the quatrains' tokens
/// concatenated in sample order with no boundary tokens.
LexicalReport lexical_report(const Corpus& sample, const LexicalConfig& config = {});

/// Concatenated token stream of a sample, in sample order.
std::vector<std::string> token_stream(const Corpus& sample, bool lowercase = true);

}  // namespace poemdiv
