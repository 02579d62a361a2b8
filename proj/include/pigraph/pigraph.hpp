#pragma once

// Umbrella header.

#include "pigraph/classify.hpp"
#include "pigraph/conditions.hpp"
#include "pigraph/cylinder.hpp"
#include "pigraph/errors.hpp"
#include "pigraph/graph.hpp"
#include "pigraph/io.hpp"
#include "pigraph/structure.hpp"
#include "pigraph/tails.hpp"
