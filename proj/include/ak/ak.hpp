// Umbrella header.
#pragma once

#include "ak/literal.hpp"
#include "ak/result.hpp"
#include "ak/plan.hpp"
#include "ak/domain.hpp"
#include "ak/semantics.hpp"
#include "ak/judgment.hpp"
#include "ak/parser.hpp"
#include "ak/proof.hpp"
#include "ak/prover.hpp"
#include "ak/derivation_io.hpp"
#include "ak/plandb.hpp"
