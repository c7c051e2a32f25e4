#pragma once

// Umbrella header.

#include "mineralize/campaign_graph.hpp"
#include "mineralize/common.hpp"
#include "mineralize/corpus_io.hpp"
#include "mineralize/ctph.hpp"
#include "mineralize/dns_alias.hpp"
#include "mineralize/enrichment.hpp"
#include "mineralize/entropy.hpp"
#include "mineralize/extract.hpp"
#include "mineralize/identify.hpp"
#include "mineralize/model.hpp"
#include "mineralize/money.hpp"
#include "mineralize/pipeline.hpp"
#include "mineralize/pool_resolve.hpp"
#include "mineralize/profit.hpp"
#include "mineralize/report.hpp"
#include "mineralize/sanity_gate.hpp"
#include "mineralize/union_find.hpp"
