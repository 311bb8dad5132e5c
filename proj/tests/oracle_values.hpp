// Reference values computed with mpmath at 40 digits by tests/oracles/gen_oracles.py.
#pragma once

namespace oracle {

struct BesselRow {
  double x, j0, j1, y0, y1;
};
struct GreenRow {
  double k, alpha, x1, x2, y1, y2, re, im;
};
struct ProfileRow {
  double beta_re, beta_im;
  int m;
  double R, re, im;
};

// x, J0, J1, Y0, Y1
inline constexpr BesselRow kBesselTable[] = {
    {1e-3, 0.99999975000001562500, 0.00049999993750000260417, -4.4714166113759232690, -636.62216723113942807},
    {0.1, 0.99750156206604003228, 0.049937526036241997556, -1.5342386513503668441, -6.4589510947020269877},
    {0.5, 0.93846980724081290423, 0.24226845767487388638, -0.44451873350670655715, -1.4714723926702430692},
    {1, 0.76519768655796655145, 0.44005058574493351596, 0.088256964215676957983, -0.78121282130028871655},
    {2.404825557695773, -1.2011950073676861231e-16, 0.51914749728946673819, 0.50992438344847905349, 0.10274668243825964843},
    {3.8317059702075125, -0.40275939570255297210, -7.4263018378704860679e-17, 0.051397673099410886952, 0.41251739515882575710},
    {5, -0.17759677131433830435, -0.32757913759146522204, -0.30851762524903378007, 0.14786314339122684480},
    {7.5, 0.26633965788037839687, 0.13524842757970550518, 0.11731328614820863084, -0.25912851048611625180},
    {10, -0.24593576445134833520, 0.043472746168861436670, 0.055671167283599391424, 0.24901542420695388392},
    {31.4, 0.098653744091573261481, -0.10110399295094161447, -0.10266152051163862967, -0.10030055613730216791},
    {100, 0.019985850304223122424, -0.077145352014112158033, -0.077244313365083152254, -0.020372312002759793305},
    {271.8, 0.032404664392765423822, 0.036006436154266980311, 0.035946764304275923709, -0.032338592211605856882},
    {1234.5, -0.013550379618035721909, 0.018217508337392498270, 0.018222995047412551598, 0.013557761447180334391},
    {5000, -0.0066489842514483478936, -0.0091174057136461594787, -0.0091167407696439626281, 0.0066480726106254194163},
    {9999.9, -0.0066965696992755818975, 0.0043377025231367821578, 0.0043380373495465721187, 0.0066967866116824367304},
};
// k, alpha, x1, x2, y1, y2, Re G, Im G
inline constexpr GreenRow kGreenTable[] = {
    {6.2831853071795864769, 0, 0.4, 2.0, 0.1, 0.2, 0.052689826976698156152, -0.0011692172061320023299},
    {6.2831853071795864769, 1.0471975511965977462, -1.0, 0.7, 2.0, -0.4, -0.072526847152018089482, -0.0036664316746881883685},
    {3.1415926535897932385, 0, 0.3, -0.5, 0.0, 0.5, -0.12727942289808759709, -0.053296163004380092362},
    {12.566370614359172954, 1.0471975511965977462, 2.5, 0.05, -2.5, -0.25, 0.021431383671268706730, -0.022453064052706265065},
};
// k, alpha, z1, z2, y1, y2, Re F, Im F
inline constexpr GreenRow kKernelTable[] = {
    {6.2831853071795864769, 0, 0, 0, 0, 0, 0.25388013140140360340, 0.0},
    {6.2831853071795864769, 1.0471975511965977462, 0.3, 0.2, -0.4, -0.1, -0.064867533922409039701, -0.0090811771736278871196},
    {12.566370614359172954, 0, 1.0, 0.5, 0.0, 0.0, 0.014150757630318885831, -3.9965825060112284444e-43},
};
// beta_re, beta_im, m, R, Re c, Im c
inline constexpr ProfileRow kProfileTable[] = {
    {5.3000000000000000000, 0.0, 0, 2.2500000000000000000, -0.050171425076783444784, 0.016664446113919706144},
    {5.3000000000000000000, 0.0, 3, 2.2500000000000000000, 0.13365994269172746219, 0.40240820214983139435},
    {0.0, 2.7000000000000000000, 0, 2.2500000000000000000, 0.16423051091586420800, 0.0},
    {0.0, 2.7000000000000000000, 5, 2.2500000000000000000, 0.021466814404933966331, 0.0},
    {1.2000000000000000000, 0.0, 7, 1.7500000000000000000, 0.0037828408619446528814, -0.0021699120292709251382},
    {6.2000000000000000000, 0.0, -4, 2.2500000000000000000, 0.37358422645534214936, 0.30947400128072768551},
};
// beta_6, |beta_7| at k = 2 pi, alpha = 0
inline constexpr double kBeta6 = 1.8650516358421378772;
inline constexpr double kBeta7 = 3.0857061421403311464;

}  // namespace oracle
