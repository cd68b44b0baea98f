#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "curlinv/vec.hpp"

namespace curlinv {

/// Octahedral orbit generator: code 1..6, weight (normalized to sum 1), parameters a, b.
struct LebedevOrbit {
    int code;
    double w, a, b;
};

namespace detail {
inline constexpr std::array kLebedev266 = {
    LebedevOrbit{1, -.1313769127326952E-2, 0, 0},
    LebedevOrbit{2, -.2522728704859336E-2, 0, 0},
    LebedevOrbit{3, .4186853881700583E-2, 0, 0},
    LebedevOrbit{4, .5315167977810885E-2, .7039373391585475, 0},
    LebedevOrbit{4, .4047142377086219E-2, .1012526248572414, 0},
    LebedevOrbit{4, .4112482394406990E-2, .4647448726420539, 0},
    LebedevOrbit{4, .3595584899758782E-2, .3277420654971629, 0},
    LebedevOrbit{4, .4256131351428158E-2, .6620338663699974, 0},
    LebedevOrbit{5, .4229582700647240E-2, .8506508083520399, 0},
    LebedevOrbit{6, .4080914225780505E-2, .3233484542692899, .1153112011009701},
    LebedevOrbit{6, .4071467593830964E-2, .2314790158712601, .5244939240922365},
};

inline constexpr std::array kLebedev302 = {
    LebedevOrbit{1, .8545911725128148E-3, 0, 0},
    LebedevOrbit{3, .3599119285025571E-2, 0, 0},
    LebedevOrbit{4, .3449788424305883E-2, .3515640345570105, 0},
    LebedevOrbit{4, .3604822601419882E-2, .6566329410219612, 0},
    LebedevOrbit{4, .3576729661743367E-2, .4729054132581005, 0},
    LebedevOrbit{4, .2352101413689164E-2, .0961830852261478, 0},
    LebedevOrbit{4, .3108953122413675E-2, .2219645236294178, 0},
    LebedevOrbit{4, .3650045807677255E-2, .7011766416089545, 0},
    LebedevOrbit{5, .2982344963171804E-2, .2644152887060663, 0},
    LebedevOrbit{5, .3600820932216460E-2, .5718955891878961, 0},
    LebedevOrbit{6, .3571540554273387E-2, .2510034751770465, .8000727494073951},
    LebedevOrbit{6, .3392312205006170E-2, .1233548532583327, .4127724083168531},
};

inline constexpr std::array kLebedev590 = {
    LebedevOrbit{1, .3095121295306187E-3, 0, 0},
    LebedevOrbit{3, .1852379698597489E-2, 0, 0},
    LebedevOrbit{4, .1871790639277744E-2, .7040954938227469, 0},
    LebedevOrbit{4, .1858812585438317E-2, .6807744066455244, 0},
    LebedevOrbit{4, .1852028828296213E-2, .6372546939258752, 0},
    LebedevOrbit{4, .1846715956151242E-2, .5044419707800358, 0},
    LebedevOrbit{4, .1818471778162769E-2, .4215761784010967, 0},
    LebedevOrbit{4, .1749564657281154E-2, .3317920736472123, 0},
    LebedevOrbit{4, .1617210647254411E-2, .2384736701421887, 0},
    LebedevOrbit{4, .1384737234851692E-2, .1459036449157763, 0},
    LebedevOrbit{4, .9764331165051050E-3, .0609503411550720, 0},
    LebedevOrbit{5, .1857161196774078E-2, .6116843442009876, 0},
    LebedevOrbit{5, .1705153996395864E-2, .3964755348199858, 0},
    LebedevOrbit{5, .1300321685886048E-2, .1724782009907724, 0},
    LebedevOrbit{6, .1842866472905286E-2, .5610263808622060, .3518280927733519},
    LebedevOrbit{6, .1802658934377451E-2, .4742392842551980, .2634716655937950},
    LebedevOrbit{6, .1849830560443660E-2, .5984126497885380, .1816640840360209},
    LebedevOrbit{6, .1713904507106709E-2, .3791035407695563, .1720795225656878},
    LebedevOrbit{6, .1555213603396808E-2, .2778673190586244, .0821302158193251},
    LebedevOrbit{6, .1802239128008525E-2, .5033564271075117, .0899920584207488},
};

inline void expand_orbit(const LebedevOrbit& o, std::vector<Vec3>& pts, std::vector<double>& wts) {
    auto push = [&](double x, double y, double z) {
        pts.push_back({x, y, z});
        wts.push_back(o.w * 4.0 * std::numbers::pi);
    };
    switch (o.code) {
        case 1:
            for (int d = 0; d < 3; ++d)
                for (int s = -1; s <= 1; s += 2) {
                    Vec3 p;
                    p[d] = s;
                    push(p.x, p.y, p.z);
                }
            break;
        case 2: {
            const double a = std::sqrt(0.5);
            for (int d = 0; d < 3; ++d)
                for (int s1 = -1; s1 <= 1; s1 += 2)
                    for (int s2 = -1; s2 <= 1; s2 += 2) {
                        Vec3 p;
                        p[(d + 1) % 3] = s1 * a;
                        p[(d + 2) % 3] = s2 * a;
                        push(p.x, p.y, p.z);
                    }
            break;
        }
        case 3: {
            const double a = std::sqrt(1.0 / 3.0);
            for (int s3 = -1; s3 <= 1; s3 += 2)
                for (int s2 = -1; s2 <= 1; s2 += 2)
                    for (int s1 = -1; s1 <= 1; s1 += 2) push(s1 * a, s2 * a, s3 * a);
            break;
        }
        case 4: {
            const double b = std::sqrt(1.0 - 2.0 * o.a * o.a);
            for (int d = 0; d < 3; ++d)
                for (int s3 = -1; s3 <= 1; s3 += 2)
                    for (int s2 = -1; s2 <= 1; s2 += 2)
                        for (int s1 = -1; s1 <= 1; s1 += 2) {
                            Vec3 p;
                            p[d] = s3 * b;
                            p[(d + 1) % 3] = s1 * o.a;
                            p[(d + 2) % 3] = s2 * o.a;
                            push(p.x, p.y, p.z);
                        }
            break;
        }
        case 5: {
            const double b = std::sqrt(1.0 - o.a * o.a);
            double a3 = o.a, b3 = b;
            for (int swap = 0; swap < 2; ++swap) {
                for (int d = 0; d < 3; ++d)
                    for (int s2 = -1; s2 <= 1; s2 += 2)
                        for (int s1 = -1; s1 <= 1; s1 += 2) {
                            Vec3 p;
                            p[(d + 1) % 3] = s1 * a3;
                            p[(d + 2) % 3] = s2 * b3;
                            push(p.x, p.y, p.z);
                        }
                a3 = b;
                b3 = o.a;
            }
            break;
        }
        case 6: {
            const double c = std::sqrt(1.0 - o.a * o.a - o.b * o.b);
            const double c3[2][5] = {{o.a, o.b, c, o.a, o.b}, {o.b, o.a, c, o.b, o.a}};
            for (int rev = 0; rev < 2; ++rev)
                for (int d = 0; d < 3; ++d)
                    for (int s3 = -1; s3 <= 1; s3 += 2)
                        for (int s2 = -1; s2 <= 1; s2 += 2)
                            for (int s1 = -1; s1 <= 1; s1 += 2)
                                push(c3[rev][d] * s1, c3[rev][d + 1] * s2, c3[rev][d + 2] * s3);
            break;
        }
        default:
            throw std::logic_error("bad Lebedev orbit code");
    }
}

}  // namespace detail

/// Lebedev-Laikov octahedral sphere rules; sizes 266, 302 and 590 are tabulated.
inline bool lebedev_available(int n) { return n == 266 || n == 302 || n == 590; }

inline void lebedev_points(int n, std::vector<Vec3>& pts, std::vector<double>& wts) {
    std::span<const LebedevOrbit> orbits;
    if (n == 266) orbits = detail::kLebedev266;
    else if (n == 302) orbits = detail::kLebedev302;
    else if (n == 590) orbits = detail::kLebedev590;
    else throw std::invalid_argument("no Lebedev rule with " + std::to_string(n) + " nodes");
    pts.clear();
    wts.clear();
    for (const auto& o : orbits) detail::expand_orbit(o, pts, wts);
    if (static_cast<int>(pts.size()) != n) throw std::logic_error("Lebedev rule size mismatch");
}

}  // namespace curlinv
