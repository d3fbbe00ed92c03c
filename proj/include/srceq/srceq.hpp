// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "srceq/lexer.hpp"
#include "srceq/structure.hpp"
#include "srceq/zip.hpp"
#include "srceq/source_model.hpp"
#include "srceq/token_diff.hpp"
#include "srceq/equivalence.hpp"
#include "srceq/repo_trace.hpp"
#include "srceq/classifier.hpp"
#include "srceq/provenance.hpp"
#include "srceq/report.hpp"
