#pragma once

#include "ceda/categorize.hpp"
#include "ceda/dataset.hpp"
#include "ceda/error.hpp"
#include "ceda/genlab.hpp"
#include "ceda/nullsim.hpp"
#include "ceda/numeric.hpp"
#include "ceda/parallel.hpp"
#include "ceda/pipeline.hpp"
#include "ceda/protocol.hpp"
#include "ceda/rng.hpp"
#include "ceda/tabulate.hpp"
