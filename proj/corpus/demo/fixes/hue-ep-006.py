import requests

BRIDGE = 'https://hue-bridge.local'
HEADERS = {'hue-application-key': 'demo-app-key'}


def get_scene(scene_id):
    url = BRIDGE + '/clip/v2/resource/scene/' + scene_id
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
