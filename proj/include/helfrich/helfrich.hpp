#pragma once

#include "helfrich/classical.hpp"
#include "helfrich/energetics.hpp"
#include "helfrich/error.hpp"
#include "helfrich/io.hpp"
#include "helfrich/linearised.hpp"
#include "helfrich/minimiser.hpp"
#include "helfrich/profile.hpp"
#include "helfrich/validators.hpp"
