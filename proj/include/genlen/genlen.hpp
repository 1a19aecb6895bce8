#pragma once

#include "genlen/channels.hpp"
#include "genlen/ensembles.hpp"
#include "genlen/liespan.hpp"
#include "genlen/numkernel.hpp"
#include "genlen/random.hpp"
#include "genlen/tensornets.hpp"
#include "genlen/wordspan.hpp"
