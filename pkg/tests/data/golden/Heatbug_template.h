class Heatbug: public objc_obj {
public:
    unsigned zbits; // from SwarmObject
    double unhappiness;
    int x, y;
    HeatValue idealTemperature;
    HeatValue outputHeat;
    float randomMoveProbability;
    id world;
    int worldXSize, worldYSize;
    id heat;
    Color bugColor;
public:
    void step();
};
