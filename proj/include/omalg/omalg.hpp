// Umbrella header: finite operation-table algebras, representations by
// space endomorphisms, morphisms and factorizations, generation with
// coordinate words, towers with skip/extension structure, brute-force
// oracles, and the text document format.
#pragma once

#include "algebra.hpp"
#include "core.hpp"
#include "document.hpp"
#include "generation.hpp"
#include "oracle.hpp"
#include "representation.hpp"
#include "tower.hpp"
#include "word.hpp"
