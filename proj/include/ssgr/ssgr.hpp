#pragma once

#include "ssgr/check.hpp"
#include "ssgr/coding.hpp"
#include "ssgr/ctrs.hpp"
#include "ssgr/goal.hpp"
#include "ssgr/narrowing.hpp"
#include "ssgr/parse.hpp"
#include "ssgr/rtg.hpp"
#include "ssgr/sigma.hpp"
#include "ssgr/ssg.hpp"
#include "ssgr/subst.hpp"
#include "ssgr/term.hpp"
#include "ssgr/transform.hpp"
#include "ssgr/unify.hpp"
