// Regenerates the bundled sample files: make_data <output-dir>

#include <mod2/io.hpp>
#include <mod2/samples.hpp>

#include <iostream>

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_data <output-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    using namespace mod2;
    try {
        write_text_file(dir + "/octahedron.off", write_off(samples::octahedron()));
        write_text_file(dir + "/torus.off", write_off(samples::torus()));
        const auto band = samples::mobius_band();
        write_text_file(dir + "/mobius_band.off", write_off(band));
        write_text_file(dir + "/mobius_loop.csv", write_loop_csv(samples::mobius_threading_loop(band)));
        write_text_file(dir + "/klein_immersion.off", write_off(samples::klein_immersion()));
        write_text_file(dir + "/genus2.off", write_off(samples::holed_slab(2)));
        write_text_file(dir + "/octahedron_loop.csv",
                        write_loop_csv(ClosedPolyline3({{0, 0, 2}, {0, 0, -2}, {3, 0, -2}, {3, 0, 2}})));
        write_text_file(dir + "/circle.json", write_fourier_json(samples::circle()));
        write_text_file(dir + "/ellipse.json", write_fourier_json(samples::ellipse(2, 1)));
        write_text_file(dir + "/shifted_circle.json", write_fourier_json(samples::circle(1, {1, 0})));
        write_text_file(dir + "/comb.csv", write_polyline_csv(samples::comb_wall().vertices()));
        write_text_file(dir + "/square.csv", write_polyline_csv(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
        write_text_file(dir + "/circle.svg",
                        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-2 -2 4 4\">\n"
                        "<path d=\"M 1 0 C 1 0.5523 0.5523 1 0 1 C -0.5523 1 -1 0.5523 -1 0 "
                        "C -1 -0.5523 -0.5523 -1 0 -1 C 0.5523 -1 1 -0.5523 1 0 Z\"/>\n</svg>\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
