"""Published constants, copied verbatim as strings.

``SIGMA2`` holds printed values of sigma^2(c). ``DISPLAYS`` holds the closed
forms ``coeff * sqrt(radicand)``; long numbers printed across two lines are
joined.
"""

from fractions import Fraction

# (p, q): (type, c)
MAXIMIZERS = {
    (13, 6): (1, "3/7"),
    (4, 3): (2, "3/7"),
    (8, 3): (2, "24/55"),
    (10, 3): (2, "40/91"),
    (12, 5): (2, "55/119"),
    (17, 8): (2, "101/225"),
    (19, 10): (3, "2879/5859"),
    (12, 7): (4, "8717/18335"),
    (8, 5): (5, "13690/29643"),
    (3, 2): (6, "277/665"),
}

SIGMA2 = {
    (13, 6): "948/3773",
    (4, 3): "38105316/146313167",
    (8, 3): "630671157052050732205279776888/2432093174293565222595046931875",
    (10, 3): "1565277378120/6036848991719",
    (12, 7): "1288914789424650371352900618359881195696318380071236938"
             "/5119937907681452900160044383953378173894837463709805375",
    (17, 8): "11889992279972830720767520926085417248816985132"
             "/47443115357778029674816911148866079222136821875",
    (19, 10): "659906978895377949815569584725014615595601472145099845291352120114337795340"
              "/2637143544549129191950553455511356263269204426999999999999999999999988557373",
    (8, 5): "2693647024766931825274236270928683791388436386344146949339630859940359610"
            "/10622921229838049651870392375050239999999999999999999999999999999121292551",
}

DISPLAYS = {
    (13, 6): ("2/7", "237/77"),
    (4, 3): ("18/7", "117609/2985983"),
    (8, 3): ("2/275", "157667789263012683051319944222/32159909742724829389686571"),
    (10, 3): ("6/637", "43479927170/14877551"),
    (12, 5): ("2/119",
              "20142835852670587790916186959991156273357389935684732999641319454307059909247205938048130"
              "/22452257707354557240087211123792674815999999999999999999999999999999999999999999999999"),
    (17, 8): ("2/675",
              "2972498069993207680191880231521354312204246283/104127550853833809985880737775289062764635"),
    (19, 10): ("2/17577",
               "164976744723844487453892396181253653898900368036274961322838030028584448835"
               "/8535800662859082038722574792812344200037037037037037037037037037037"),
    (12, 7): ("1/18335",
              "1288914789424650371352900618359881195696318380071236938"
              "/15230103878098355389592475654267327331681959935"),
    (8, 5): ("1/326073",
             "2693647024766931825274236270928683791388436386344146949339630859940359610"
             "/99911224761539601215386446280991735537190082644628099173553719"),
    (3, 2): ("2/665", "305671451762616889661445636790873/10314424798490535546171949055"),
}


def display_value(pq) -> Fraction:
    coeff, radicand = DISPLAYS[pq]
    return Fraction(coeff) ** 2 * Fraction(radicand)


# Printed partitions: (lo, hi, depth, kind, printed number).
# For quadratic bounds the number is the (negative) gap sigma^2 bound minus
# sigma^2(c); for monotone pieces it is the derivative bound.
PARTITION_13_6 = [
    ("0", "5/13", 0, "quad", "-10303/1275274"),
    ("5/13", "3/7", 1, "up", "179/1365"),
    ("3/7", "942/2197", 3, "down", "-2113/1186380"),
    ("942/2197", "850/1981", 3, "quad", "-63760513/94408677050688"),
    ("850/1981", "943/2197", 3, "quad", "-16535003/22061250587376"),
    ("943/2197", "73/169", 2, "quad", "-1662359/1311231625704"),
    ("73/169", "58/133", 2, "quad", "-1842013/69828903144"),
    ("58/133", "6/13", 1, "quad", "-6415/212480268"),
    ("6/13", "1/2", 1, "quad", "-1741/2550548"),
]

PARTITION_4_3 = [
    ("0", "1/4", 0, "quad", "-64335979/2341010672"),
    ("1/4", "1/3", 1, "quad", "-362668489/10534548024"),
    ("1/3", "3/8", 1, "quad", "-111030749/9364042688"),
    ("3/8", "27/64", 2, "quad", "-1477989115/5393688588288"),
    ("27/64", "3/7", 3, "up", "1/864"),
    ("3/7", "16/37", 3, "down", "-19/864"),
    ("16/37", "7/16", 2, "quad", "-16743731111/57687184979424"),
    ("7/16", "4/9", 2, "quad", "-12926489833/15169749154560"),
    ("4/9", "1/2", 2, "quad", "-463595039/1896218644320"),
]
