#pragma once
// Convenience umbrella for the whole library. HTTP adapters are not
// included here; pull in hypogen/adapters_http.hpp explicitly when a
// build actually talks to services.

#include "hypogen/candidate_generator.hpp"
#include "hypogen/config.hpp"
#include "hypogen/errors.hpp"
#include "hypogen/evaluation.hpp"
#include "hypogen/grammar.hpp"
#include "hypogen/jsonl.hpp"
#include "hypogen/kb_data.hpp"
#include "hypogen/knowledge_engine.hpp"
#include "hypogen/mlp.hpp"
#include "hypogen/paraphrase.hpp"
#include "hypogen/pipeline.hpp"
#include "hypogen/prompt_parser.hpp"
#include "hypogen/rankers.hpp"
#include "hypogen/relations.hpp"
#include "hypogen/rng.hpp"
#include "hypogen/text.hpp"
