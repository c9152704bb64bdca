#pragma once

// Umbrella header for the subtitle corpus mining library.

#include "subalign/capalign.hpp"
#include "subalign/docalign.hpp"
#include "subalign/document.hpp"
#include "subalign/encoding.hpp"
#include "subalign/errors.hpp"
#include "subalign/filter.hpp"
#include "subalign/normalize.hpp"
#include "subalign/pipeline.hpp"
#include "subalign/porter.hpp"
#include "subalign/spellcheck.hpp"
#include "subalign/srt.hpp"
#include "subalign/synthbench.hpp"
#include "subalign/unicode.hpp"
#include "subalign/util.hpp"
