import requests

BRIDGE = 'https://hue-bridge.local'
HEADERS = {'hue-application-key': 'demo-app-key'}


def list_lights():
    url = BRIDGE + '/clip/v2/resource/light'
    resp = requests.get(url, headers=HEADERS)
    return resp.json()
