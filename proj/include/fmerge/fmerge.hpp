#pragma once

#include "formula.hpp"
#include "syntax.hpp"
#include "semantics.hpp"
#include "forgetting.hpp"
#include "merging.hpp"
#include "generators.hpp"
#include "profile_file.hpp"
#include "postulates.hpp"
