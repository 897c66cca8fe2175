#include <array>
#include <span>

#include "mvlsw/error.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

namespace {

// Extremal-phase Daubechies lowpass filters, normalised to sum sqrt(2).
// Generated by tools/gen_daubechies.py.
// clang-format off
const std::array<std::vector<double>, 10> kDaubExPhase = {{
    // 1 vanishing moment
    {7.071067811865475244008444e-1,
     7.071067811865475244008444e-1},
    // 2 vanishing moments
    {4.829629131445341433748716e-1,
     8.365163037378079055752938e-1,
     2.241438680420133810259728e-1,
     -1.294095225512603811744494e-1},
    // 3 vanishing moments
    {3.326705529500826159985116e-1,
     8.068915093110925764944936e-1,
     4.598775021184915700951519e-1,
     -1.350110200102545886963899e-1,
     -8.544127388202666169281917e-2,
     3.522629188570953660274066e-2},
    // 4 vanishing moments
    {2.303778133088965008632912e-1,
     7.14846570552915647089922e-1,
     6.308807679298589078817163e-1,
     -2.798376941685985421141375e-2,
     -1.870348117190930840795707e-1,
     3.084138183556076362721936e-2,
     3.288301166688519973540751e-2,
     -1.059740178506903210488321e-2},
    // 5 vanishing moments
    {1.601023979741929144807237e-1,
     6.038292697971896705401193e-1,
     7.243085284377729277280712e-1,
     1.384281459013207315053971e-1,
     -2.422948870663820318625714e-1,
     -3.224486958463837464847976e-2,
     7.757149384004571352313049e-2,
     -6.241490212798274274190519e-3,
     -1.258075199908199946850974e-2,
     3.335725285473771277998183e-3},
    // 6 vanishing moments
    {1.115407433501094636213239e-1,
     4.946238903984530856772042e-1,
     7.511339080210953506789345e-1,
     3.152503517091976290859897e-1,
     -2.262646939654398200763145e-1,
     -1.297668675672619355622896e-1,
     9.750160558732304910234355e-2,
     2.752286553030572862554084e-2,
     -3.158203931748602956507908e-2,
     5.538422011614961392519184e-4,
     4.777257510945510639635975e-3,
     -1.077301085308479564852622e-3},
    // 7 vanishing moments
    {7.785205408500917901996352e-2,
     3.965393194819173065390004e-1,
     7.291320908462351199169431e-1,
     4.697822874051931224715912e-1,
     -1.439060039285649754050684e-1,
     -2.240361849938749826381404e-1,
     7.130921926683026475087657e-2,
     8.061260915108307191292248e-2,
     -3.802993693501441357959206e-2,
     -1.657454163066688065410767e-2,
     1.255099855609984061298989e-2,
     4.295779729213665211321291e-4,
     -1.801640704047490915268263e-3,
     3.537137999745202484462958e-4},
    // 8 vanishing moments
    {5.441584224310400995500941e-2,
     3.128715909142999706591624e-1,
     6.756307362972898068078008e-1,
     5.853546836542067127712655e-1,
     -1.582910525634930566738055e-2,
     -2.840155429615469265162031e-1,
     4.7248457391328277036059e-4,
     1.287474266204784588570293e-1,
     -1.736930100180754616961615e-2,
     -4.408825393079475150676372e-2,
     1.398102791739828164872293e-2,
     8.746094047405776716382743e-3,
     -4.870352993451574310422182e-3,
     -3.917403733769470462980804e-4,
     6.754494064505693663695476e-4,
     -1.174767841247695337306282e-4},
    // 9 vanishing moments
    {3.807794736387834658869766e-2,
     2.438346746125903537320416e-1,
     6.048231236901111119030769e-1,
     6.572880780513005380782126e-1,
     1.331973858250075761909549e-1,
     -2.932737832791749088064032e-1,
     -9.684078322297646051350813e-2,
     1.485407493381063801350727e-1,
     3.07256814793333792123174e-2,
     -6.763282906132997367564227e-2,
     2.509471148314519575871897e-4,
     2.236166212367909720537378e-2,
     -4.723204757751397277925708e-3,
     -4.281503682463429834496795e-3,
     1.847646883056226476619129e-3,
     2.303857635231959672052164e-4,
     -2.519631889427101369749887e-4,
     3.934732031627159948068988e-5},
    // 10 vanishing moments
    {2.667005790055555358661745e-2,
     1.88176800077691489020893e-1,
     5.272011889317255864817448e-1,
     6.884590394536035657418718e-1,
     2.81172343660577460748727e-1,
     -2.498464243273153794161019e-1,
     -1.959462743773770435042993e-1,
     1.273693403357932600826772e-1,
     9.305736460357235116035229e-2,
     -7.139414716639708714533609e-2,
     -2.945753682187581285828324e-2,
     3.321267405934100173976365e-2,
     3.606553566956169655423291e-3,
     -1.073317548333057504431811e-2,
     1.395351747052901165789318e-3,
     1.992405295185056117158742e-3,
     -6.85856694959711626561371e-4,
     -1.16466855129285450951481e-4,
     9.358867032006959133405013e-5,
     -1.326420289452124481243668e-5},
}};
// clang-format on

}  // namespace

std::span<const double> daubechies_lowpass(int number) {
  if (number < 1 || number > static_cast<int>(kDaubExPhase.size()))
    throw Error(ErrorCode::UnsupportedFilter, "DaubExPhase filter number must be in 1..10");
  return kDaubExPhase[static_cast<std::size_t>(number - 1)];
}

}  // namespace mvlsw
